"""State propagation, fidelity and population bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .basis import Kind, classify
from .errors import PropagationError
from .hamiltonian import is_hermitian

POPULATION_KEYS = ("P_initial", "P_e", "P_c", "P_f", "P_final")

_KIND_KEY = {
    Kind.INITIAL: "P_initial",
    Kind.ATOM_EXCITED: "P_e",
    Kind.CAVITY_PHOTON: "P_c",
    Kind.FIBER_PHOTON: "P_f",
    Kind.FINAL: "P_final",
}


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n_samples, dim)
    hermitian: bool = True
    _populations: dict = field(default=None, init=False, repr=False)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    @property
    def populations(self) -> dict:
        if self._populations is None:
            self._populations = populations(self)
        return self._populations


def _check_inputs(h, psi0):
    h = np.asarray(h, dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"operator must be square, got shape {h.shape}")
    if psi0.shape != (h.shape[0],):
        raise ValueError(f"state of shape {psi0.shape} does not match operator {h.shape}")
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(psi0))):
        raise PropagationError("non-finite entries in operator or initial state")
    return h, psi0


def evolve(h, psi0, t_final: float, n_samples: int = 2001, hermitian: bool | None = None) -> Trajectory:
    """Sample psi(t) = exp(-i H t) psi0 at ``n_samples`` uniform times in [0, t_final].

    Hermitian operators are propagated through their eigendecomposition;
    otherwise a one-step propagator ``expm(-i H dt)`` is applied repeatedly.
    ``hermitian=None`` detects which case applies.
    """
    h, psi0 = _check_inputs(h, psi0)
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if hermitian is None:
        hermitian = is_hermitian(h, atol=1e-12 * max(1.0, float(np.abs(h).max())))
    times = np.linspace(0.0, t_final, n_samples)

    if hermitian:
        w, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
        coeffs = vecs.conj().T @ psi0
        states = (np.exp(-1j * np.outer(times, w)) * coeffs) @ vecs.T
    else:
        step = expm(-1j * h * (times[1] - times[0]))
        states = np.empty((n_samples, h.shape[0]), dtype=complex)
        states[0] = psi0
        for k in range(1, n_samples):
            states[k] = step @ states[k - 1]
    if not np.all(np.isfinite(states)):
        raise PropagationError("propagation produced non-finite amplitudes")
    return Trajectory(times=times, states=states, hermitian=hermitian)


def evolve_rk4(h, psi0, t_final: float, n_steps: int) -> np.ndarray:
    """Fixed-step RK4 integration of i dpsi/dt = H psi; returns psi(t_final).

    Only used as a cross-check of :func:`evolve`.
    """
    h, psi = _check_inputs(h, psi0)
    dt = t_final / n_steps
    rhs = lambda x: -1j * (h @ x)  # noqa: E731
    for _ in range(n_steps):
        k1 = rhs(psi)
        k2 = rhs(psi + 0.5 * dt * k1)
        k3 = rhs(psi + 0.5 * dt * k2)
        k4 = rhs(psi + dt * k3)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def fidelity(a, b) -> float:
    """|<a|b>|^2."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"state shapes differ: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)


def populations(traj: Trajectory | np.ndarray) -> dict:
    """Per-sample populations grouped by basis-state kind.

    Accepts a trajectory or a single state / stack of states on a chain
    basis of size 4N-1.
    """
    states = traj.states if isinstance(traj, Trajectory) else np.asarray(traj)
    single = states.ndim == 1
    states = np.atleast_2d(states)
    dim = states.shape[1]
    if (dim + 1) % 4:
        raise ValueError(f"dimension {dim} is not a chain basis size 4N-1")
    n_atoms = (dim + 1) // 4
    probs = np.abs(states) ** 2
    out = {key: np.zeros(states.shape[0]) for key in POPULATION_KEYS}
    for idx in range(dim):
        out[_KIND_KEY[classify(idx, n_atoms).kind]] += probs[:, idx]
    if single:
        return {k: float(v[0]) for k, v in out.items()}
    return out


def analytic_dark_evolution(t, omega_1: float, omega_n: float, n1: float) -> np.ndarray:
    """Amplitudes on (initial, dark, final) under the 3-level effective drive.

    Starting from the initial state, with W = sqrt(omega_1^2 + omega_n^2)::

        c_initial = (omega_1^2 cos(n1 W t) + omega_n^2) / W^2
        c_dark    = -i omega_1 sin(n1 W t) / W
        c_final   = omega_1 omega_n (cos(n1 W t) - 1) / W^2

    Scalar ``t`` gives shape (3,), array ``t`` gives (len(t), 3).
    """
    if not 0 < n1 <= 1:
        raise ValueError("n1 must lie in (0, 1]")
    t = np.asarray(t, dtype=float)
    w2 = omega_1 ** 2 + omega_n ** 2
    if w2 == 0:
        amps = np.stack([np.ones_like(t), np.zeros_like(t), np.zeros_like(t)], axis=-1)
        return amps.astype(complex)
    w = np.sqrt(w2)
    cos = np.cos(n1 * w * t)
    sin = np.sin(n1 * w * t)
    return np.stack([
        (omega_1 ** 2 * cos + omega_n ** 2) / w2 + 0j,
        -1j * omega_1 * sin / w,
        omega_1 * omega_n * (cos - 1.0) / w2 + 0j,
    ], axis=-1)
