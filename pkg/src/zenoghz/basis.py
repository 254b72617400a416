"""Restricted single-excitation basis for an odd chain of fiber-linked cavities.

Starting from atom 1 in |1> with every boson mode empty, the total
Hamiltonian only ever moves the single excitation along the chain::

    initial -> e_1 -> c_1(out) -> f_1 -> c_1(in) -> e_2 -> c_2(out) -> ... -> e_N -> final

so the reachable space has 4N-1 states. Indices here are 0-based; the
conventional 1-based label phi_k maps to index k-1.

Cavity modes are named ``a{atom}{pol}`` and fiber modes ``b{link}``. Link j
joins atom j to atom j+1 and uses right-polarized cavity modes for odd j,
left-polarized for even j. Interior even atoms therefore absorb on |0>-e via
their right mode and emit on |1>-e via the left mode; interior odd atoms do
the reverse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ConfigError

SQRT2_PLUS_1 = math.sqrt(2.0) + 1.0


@dataclass(frozen=True)
class ChainConfig:
    """Physical parameters of an N-atom cavity chain.

    All frequencies share one unit (by convention g = 1, so times come out in
    units of 1/g). ``frequency_unit`` optionally gives that unit in rad/s so
    that pulse durations can also be reported in seconds.

    ``g_dev`` holds the deviations of the two end atom-cavity couplings
    (atom 1 and atom N); interior couplings stay at ``g``. ``v_dev`` holds one
    deviation per fiber. ``omega_1`` defaults to (sqrt(2)+1) * ``omega_n`` and
    ``v`` defaults to ``g``.
    """

    n_atoms: int = 3
    g: float = 1.0
    v: Optional[float] = None
    omega_n: float = 0.04
    omega_1: Optional[float] = None
    gamma: float = 0.0
    kappa_c: float = 0.0
    kappa_f: float = 0.0
    g_dev: tuple = (0.0, 0.0)
    v_dev: Optional[tuple] = None
    frequency_unit: Optional[float] = None

    def __post_init__(self):
        n = self.n_atoms
        if isinstance(n, bool) or not isinstance(n, int) or n < 3 or n % 2 == 0:
            raise ConfigError(f"n_atoms must be an odd integer >= 3, got {n!r}")
        if self.v is None:
            object.__setattr__(self, "v", float(self.g))
        if self.omega_1 is None:
            object.__setattr__(self, "omega_1", SQRT2_PLUS_1 * float(self.omega_n))
        if self.v_dev is None:
            object.__setattr__(self, "v_dev", (0.0,) * (n - 1))
        object.__setattr__(self, "g_dev", tuple(float(x) for x in self.g_dev))
        object.__setattr__(self, "v_dev", tuple(float(x) for x in self.v_dev))

        scalars = {name: getattr(self, name) for name in
                   ("g", "v", "omega_1", "omega_n", "gamma", "kappa_c", "kappa_f")}
        for name, value in scalars.items():
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        if self.g <= 0 or self.v <= 0:
            raise ConfigError("g and v must be positive")
        for name in ("gamma", "kappa_c", "kappa_f"):
            if scalars[name] < 0:
                raise ConfigError(f"decay rate {name} must be >= 0, got {scalars[name]}")
        if len(self.g_dev) != 2:
            raise ConfigError("g_dev must hold exactly two end-coupling deviations")
        if len(self.v_dev) != n - 1:
            raise ConfigError(f"v_dev must hold {n - 1} fiber deviations, got {len(self.v_dev)}")
        if not all(math.isfinite(x) for x in self.g_dev + self.v_dev):
            raise ConfigError("coupling deviations must be finite")
        if self.frequency_unit is not None and not self.frequency_unit > 0:
            raise ConfigError("frequency_unit must be positive")

    @property
    def dim(self) -> int:
        return 4 * self.n_atoms - 1

    @property
    def has_deviations(self) -> bool:
        return any(self.g_dev) or any(self.v_dev)

    def atom_cavity_coupling(self, atom: int) -> float:
        """Coupling of ``atom`` (1-based) to either of its cavity modes."""
        if atom == 1:
            return self.g + self.g_dev[0]
        if atom == self.n_atoms:
            return self.g + self.g_dev[1]
        return self.g

    def fiber_coupling(self, link: int) -> float:
        return self.v + self.v_dev[link - 1]

    def is_zeno(self, threshold: float = 0.1) -> bool:
        """True if max(omega_1, omega_n) / min(g, v) <= threshold."""
        return max(abs(self.omega_1), abs(self.omega_n)) / min(self.g, self.v) <= threshold

    def replace(self, **changes) -> "ChainConfig":
        return replace(self, **changes)


class Kind(Enum):
    INITIAL = "initial"
    ATOM_EXCITED = "atom_excited"
    CAVITY_PHOTON = "cavity_photon"
    FIBER_PHOTON = "fiber_photon"
    FINAL = "final"


@dataclass(frozen=True)
class BasisState:
    index: int
    kind: Kind
    atom: Optional[int] = None
    link: Optional[int] = None
    side: Optional[str] = None
    # occupation labels: atomic levels '0', '1', 'e' and the occupied boson mode
    atoms: tuple = field(default=(), compare=False)
    mode: Optional[str] = field(default=None, compare=False)

    @property
    def label(self) -> str:
        if self.kind is Kind.ATOM_EXCITED:
            return f"e{self.atom}"
        if self.kind is Kind.CAVITY_PHOTON:
            return f"c{self.link}{self.side}"
        if self.kind is Kind.FIBER_PHOTON:
            return f"f{self.link}"
        return self.kind.value


def link_polarization(link: int) -> str:
    return "r" if link % 2 == 1 else "l"


def cavity_mode(atom: int, link: int) -> str:
    return f"a{atom}{link_polarization(link)}"


def _check_n(n_atoms) -> None:
    if isinstance(n_atoms, bool) or not isinstance(n_atoms, int) or n_atoms < 3 or n_atoms % 2 == 0:
        raise ConfigError(f"n_atoms must be an odd integer >= 3, got {n_atoms!r}")


def _n_atoms(config) -> int:
    n = config.n_atoms if isinstance(config, ChainConfig) else config
    _check_n(n)
    return n


def enumerate_basis(config) -> list[BasisState]:
    """Return the 4N-1 reachable states in canonical chain order.

    ``config`` may be a :class:`ChainConfig` or a bare atom count.
    """
    n = _n_atoms(config)

    def levels(passed: int, excited: Optional[int] = None) -> tuple:
        # atoms 1..passed have already handed the excitation on
        out = []
        for a in range(1, n + 1):
            if a == excited:
                out.append("e")
            elif a <= passed:
                out.append("0" if a == 1 else "1")
            else:
                out.append("0")
        return tuple(out)

    states = [BasisState(0, Kind.INITIAL, atoms=("1",) + ("0",) * (n - 1))]
    for i in range(1, n + 1):
        states.append(BasisState(len(states), Kind.ATOM_EXCITED, atom=i, atoms=levels(i - 1, excited=i)))
        if i == n:
            break
        here = levels(i)
        states.append(BasisState(len(states), Kind.CAVITY_PHOTON, link=i, side="out",
                                 atoms=here, mode=cavity_mode(i, i)))
        states.append(BasisState(len(states), Kind.FIBER_PHOTON, link=i, atoms=here, mode=f"b{i}"))
        states.append(BasisState(len(states), Kind.CAVITY_PHOTON, link=i, side="in",
                                 atoms=here, mode=cavity_mode(i + 1, i)))
    states.append(BasisState(len(states), Kind.FINAL, atoms=levels(n)))
    return states


def classify(index: int, config) -> BasisState:
    """Kind (and atom/link/side tags) of the basis vector at ``index``."""
    n = _n_atoms(config)
    dim = 4 * n - 1
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} outside [0, {dim - 1}]")
    if index == 0:
        return BasisState(0, Kind.INITIAL)
    if index == dim - 1:
        return BasisState(index, Kind.FINAL)
    hop, step = divmod(index - 1, 4)
    site = hop + 1
    if step == 0:
        return BasisState(index, Kind.ATOM_EXCITED, atom=site)
    if step == 2:
        return BasisState(index, Kind.FIBER_PHOTON, link=site)
    return BasisState(index, Kind.CAVITY_PHOTON, link=site, side="out" if step == 1 else "in")


def kind_indices(config, kind: Kind) -> list[int]:
    return [s.index for s in enumerate_basis(config) if s.kind is kind]


def basis_vector(config, index: int) -> np.ndarray:
    dim = 4 * _n_atoms(config) - 1
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi
