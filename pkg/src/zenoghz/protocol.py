"""GHZ generation, EPR reduction and parameter sweeps."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .basis import SQRT2_PLUS_1, ChainConfig
from .dynamics import Trajectory, evolve, fidelity
from .errors import ConfigError
from .hamiltonian import assemble_decoherent, assemble_total
from .zeno import dark_basis, effective_hamiltonian

DEFAULT_SAMPLES = 2001


def ghz_pulse_time(config: ChainConfig, tol: float | None = None) -> float:
    """Drive duration tau = pi / (N1 sqrt(omega_1^2 + omega_n^2)).

    N1 is read off the dark state of ``config``; when end or fiber couplings
    deviate, the numerically computed dark state is used, so tau is
    pi / sqrt((a_1 omega_1)^2 + (a_N omega_n)^2) with a_i its amplitudes on
    the driven atoms.
    """
    if not (config.omega_1 > 0 and config.omega_n > 0):
        raise ConfigError("GHZ pulse time needs both drives switched on")
    h = effective_hamiltonian(config, tol)
    return math.pi / math.hypot(abs(h[0, 1]), abs(h[2, 1]))


def pulse_time_seconds(config: ChainConfig, tau: float | None = None) -> Optional[float]:
    """Convert tau to seconds when ``config.frequency_unit`` (rad/s) is known."""
    if config.frequency_unit is None:
        return None
    if tau is None:
        tau = ghz_pulse_time(config)
    return tau / config.frequency_unit


def initial_state(config: ChainConfig) -> np.ndarray:
    psi = np.zeros(config.dim, dtype=complex)
    psi[0] = 1.0
    return psi


def ghz_target(config: ChainConfig) -> np.ndarray:
    """-(initial + final)/sqrt(2): the GHZ state with all boson modes empty."""
    psi = np.zeros(config.dim, dtype=complex)
    psi[0] = psi[-1] = -1.0 / math.sqrt(2.0)
    return psi


@dataclass
class GhzReport:
    config: ChainConfig
    tau: float
    tau_seconds: Optional[float]
    final_state: np.ndarray
    fidelity: float
    max_P_c: float
    max_P_f: float
    max_P_e: float
    final_norm: float
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    @property
    def tau_gt(self) -> float:
        """tau in units of 1/g."""
        return self.tau * self.config.g


def run_ghz(config: ChainConfig, use_decoherence: bool = False, n_samples: int = DEFAULT_SAMPLES,
            tau: float | None = None, keep_trajectory: bool = True,
            tol: float | None = None) -> GhzReport:
    """Drive the chain from the initial state for tau and score it against the GHZ target.

    ``tau`` overrides the pulse time computed from ``config`` (for instance,
    to study a pulse calibrated on nominal couplings).
    """
    if tau is None:
        tau = ghz_pulse_time(config, tol)
    h = assemble_decoherent(config) if use_decoherence else assemble_total(config)
    traj = evolve(h, initial_state(config), tau, n_samples, hermitian=not use_decoherence)
    pops = traj.populations
    final = traj.final_state
    return GhzReport(
        config=config,
        tau=tau,
        tau_seconds=pulse_time_seconds(config, tau),
        final_state=final,
        fidelity=min(1.0, fidelity(ghz_target(config), final)),
        max_P_c=float(pops["P_c"].max()),
        max_P_f=float(pops["P_f"].max()),
        max_P_e=float(pops["P_e"].max()),
        final_norm=float(np.linalg.norm(final)),
        trajectory=traj if keep_trajectory else None,
    )


# ---------------------------------------------------------------- registers


def _bits_index(bits: str) -> int:
    return int(bits, 2)


def atomic_register(state: np.ndarray, config: ChainConfig) -> np.ndarray:
    """Qubit register (atom 1 = most significant bit) carried by a chain state.

    Only the two vacuum end states live in the qubit space; everything else
    is dropped and the result renormalized.
    """
    n = config.n_atoms
    reg = np.zeros(2 ** n, dtype=complex)
    reg[_bits_index("1" + "0" * (n - 1))] = state[0]
    reg[_bits_index("0" + "1" * (n - 1))] = state[-1]
    norm = np.linalg.norm(reg)
    if norm == 0:
        raise ValueError("state has no weight on the atomic qubit subspace")
    return reg / norm


def ghz_register(n_atoms: int) -> np.ndarray:
    reg = np.zeros(2 ** n_atoms, dtype=complex)
    reg[_bits_index("1" + "0" * (n_atoms - 1))] = -1.0 / math.sqrt(2.0)
    reg[_bits_index("0" + "1" * (n_atoms - 1))] = -1.0 / math.sqrt(2.0)
    return reg


def concurrence(state: np.ndarray) -> float:
    """Concurrence of a pure two-qubit state: 2|ad - bc|."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise ValueError("concurrence needs a 4-amplitude two-qubit state")
    a, b, c, d = state / np.linalg.norm(state)
    return float(2.0 * abs(a * d - b * c))


@dataclass
class EprResult:
    probabilities: tuple
    branches: dict  # outcome -> normalized state of the other qubits, or None
    flagged: tuple = ()


# exp(i sigma_x pi/4)
ROTATION_X = np.array([[1.0, 1j], [1j, 1.0]]) / math.sqrt(2.0)


def epr_reduce(register: np.ndarray, measured_atom: int, prob_floor: float = 1e-15) -> EprResult:
    """Rotate ``measured_atom`` (1-based) by exp(i sigma_x pi/4) and measure it in {|0>, |1>}.

    Each outcome's branch is the renormalized state of the remaining qubits in
    their original order. Outcomes with probability below ``prob_floor`` are
    flagged and their branch is ``None``.
    """
    register = np.asarray(register, dtype=complex)
    n = int(round(math.log2(register.size)))
    if 2 ** n != register.size:
        raise ValueError("register length must be a power of two")
    if not 1 <= measured_atom <= n:
        raise ValueError(f"measured_atom must be in 1..{n}")
    axis = measured_atom - 1
    tensor = register.reshape((2,) * n)
    rotated = np.moveaxis(np.tensordot(ROTATION_X, tensor, axes=([1], [axis])), 0, axis)

    probs, branches, flagged = [], {}, []
    for outcome in (0, 1):
        branch = np.take(rotated, outcome, axis=axis).reshape(-1)
        p = float(np.vdot(branch, branch).real)
        probs.append(p)
        if p < prob_floor:
            flagged.append(outcome)
            branches[outcome] = None
        else:
            branches[outcome] = branch / math.sqrt(p)
    return EprResult(probabilities=tuple(probs), branches=branches, flagged=tuple(flagged))


# ---------------------------------------------------------------- sweeps

OBSERVABLES = ("fidelity", "max_P_c", "max_P_f", "max_P_e", "tau", "final_norm")


def apply_param(config: ChainConfig, name: str, value: float) -> ChainConfig:
    """Return ``config`` with sweep parameter ``name`` set to ``value``.

    Sweeping ``omega_n`` (alias ``omega_<N>``) keeps the template's
    omega_1/omega_n ratio. ``delta_g1`` and ``delta_gN`` (alias
    ``delta_g<N>``) set the end-coupling deviations, ``delta_v<j>`` the
    deviation of fiber j.
    """
    n = config.n_atoms
    value = float(value)
    if name in ("g", "v", "omega_1", "gamma", "kappa_c", "kappa_f"):
        return config.replace(**{name: value})
    if name in ("omega_n", f"omega_{n}"):
        ratio = config.omega_1 / config.omega_n if config.omega_n else SQRT2_PLUS_1
        return config.replace(omega_n=value, omega_1=ratio * value)
    if name == "delta_g1":
        return config.replace(g_dev=(value, config.g_dev[1]))
    if name in ("delta_gN", f"delta_g{n}"):
        return config.replace(g_dev=(config.g_dev[0], value))
    if name.startswith("delta_v") and name[7:].isdigit():
        j = int(name[7:])
        if 1 <= j <= n - 1:
            v_dev = list(config.v_dev)
            v_dev[j - 1] = value
            return config.replace(v_dev=tuple(v_dev))
    raise ConfigError(f"unknown sweep parameter {name!r}")


@dataclass
class Axis:
    param: str
    values: np.ndarray

    @classmethod
    def linspace(cls, param: str, start: float, stop: float, steps: int) -> "Axis":
        if steps < 1:
            raise ConfigError("axis needs at least one step")
        return cls(param, np.linspace(start, stop, steps))


@dataclass
class SweepResult:
    axes: list
    observable: str
    grid: np.ndarray  # shape (len(axis1),) or (len(axis1), len(axis2))

    @property
    def header(self) -> list:
        return [a.param for a in self.axes] + [self.observable]

    def rows(self):
        """Row-major (axis1 outer, axis2 inner) records matching :attr:`header`."""
        if len(self.axes) == 1:
            for x, val in zip(self.axes[0].values, self.grid):
                yield (float(x), float(val))
        else:
            for i, x in enumerate(self.axes[0].values):
                for j, y in enumerate(self.axes[1].values):
                    yield (float(x), float(y), float(self.grid[i, j]))


def _evaluate_point(args):
    config, observable, use_decoherence, n_samples = args
    report = run_ghz(config, use_decoherence=use_decoherence, n_samples=n_samples,
                     keep_trajectory=False)
    return getattr(report, observable)


def sweep(template: ChainConfig, axis1: Axis, axis2: Axis | None = None,
          observable: str = "fidelity", use_decoherence: bool = False,
          n_samples: int = DEFAULT_SAMPLES, jobs: int = 1) -> SweepResult:
    """Evaluate ``observable`` of :func:`run_ghz` on a 1-D or 2-D parameter grid.

    Results do not depend on ``jobs``; points are independent and collected
    in grid order.
    """
    if observable not in OBSERVABLES:
        raise ConfigError(f"unknown observable {observable!r}; choose from {OBSERVABLES}")
    axes = [axis1] if axis2 is None else [axis1, axis2]
    configs = []
    for x in axis1.values:
        c1 = apply_param(template, axis1.param, x)
        if axis2 is None:
            configs.append(c1)
        else:
            configs += [apply_param(c1, axis2.param, y) for y in axis2.values]
    work = [(c, observable, use_decoherence, n_samples) for c in configs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_evaluate_point, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        values = [_evaluate_point(w) for w in work]
    grid = np.array(values, dtype=float)
    if axis2 is not None:
        grid = grid.reshape(len(axis1.values), len(axis2.values))
    return SweepResult(axes=axes, observable=observable, grid=grid)


# ---------------------------------------------------------------- full vs effective


@dataclass
class EffectiveComparison:
    times: np.ndarray
    p_full: np.ndarray
    p_eff: np.ndarray
    tau: float

    @property
    def max_deviation(self) -> float:
        return float(np.abs(self.p_full - self.p_eff).max())


def compare_effective(config: ChainConfig, n_samples: int = DEFAULT_SAMPLES,
                      tol: float | None = None) -> EffectiveComparison:
    """Initial-state occupation over [0, tau] under H_total and under the 3-level H_eff."""
    tau = ghz_pulse_time(config, tol)
    full = evolve(assemble_total(config), initial_state(config), tau, n_samples, hermitian=True)
    eff = evolve(effective_hamiltonian(config, tol), np.array([1, 0, 0], dtype=complex), tau, n_samples,
                 hermitian=True)
    return EffectiveComparison(times=full.times, p_full=np.abs(full.states[:, 0]) ** 2,
                               p_eff=np.abs(eff.states[:, 0]) ** 2, tau=tau)


def effective_trajectory(config: ChainConfig, t_final: float, n_samples: int = DEFAULT_SAMPLES) -> Trajectory:
    """Effective 3-level evolution embedded back into the full chain basis."""
    eff = evolve(effective_hamiltonian(config), np.array([1, 0, 0], dtype=complex), t_final, n_samples,
                 hermitian=True)
    return Trajectory(times=eff.times, states=eff.states @ dark_basis(config).T, hermitian=True)


def scan_drive_ratio(config: ChainConfig, ratios: Sequence[float]) -> np.ndarray:
    """Ideal (effective-model) GHZ fidelity at tau as a function of omega_1/omega_n."""
    out = []
    for r in ratios:
        c = config.replace(omega_1=float(r) * config.omega_n)
        traj = effective_trajectory(c, ghz_pulse_time(c), 2)
        out.append(fidelity(ghz_target(c), traj.final_state))
    return np.array(out)
