"""Independent check of the restricted Hamiltonian by brute-force second quantization.

The total Hamiltonian is written term by term on the full product space
(three levels per atom, 0/1 photons per boson mode), projected onto the
restricted basis, and the projection is certified by checking that the
restricted span is invariant under the full operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg  # noqa: F401  (sp.linalg.norm)

from .basis import ChainConfig, enumerate_basis
from .errors import ConfigError, OracleError

LEVELS = {"0": 0, "1": 1, "e": 2}


@dataclass
class OracleResult:
    matrix: np.ndarray
    residual: float
    full_dim: int


def _transition(upper: str, lower: str) -> sp.csr_matrix:
    m = sp.lil_matrix((3, 3))
    m[LEVELS[upper], LEVELS[lower]] = 1.0
    return m.tocsr()


# photon number truncated at 1: a|1> = |0>
_ANNIHILATE = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


def hamiltonian_terms(config: ChainConfig):
    """Symbolic terms of H_total for an odd chain, before adding h.c.

    Returns ``(drives, atom_cavity, fiber)`` where drives are
    ``(omega, atom)`` for omega |e><1|, atom-cavity terms are
    ``(g, atom, mode, lower_level)`` for g a_mode |e><lower| and fiber terms
    are ``(v, fiber_mode, cavity_mode)`` for v b^dag a.
    """
    n = config.n_atoms
    k = (n - 1) // 2
    g1, gn = config.g + config.g_dev[0], config.g + config.g_dev[1]
    g = config.g

    drives = [(config.omega_1, 1), (config.omega_n, n)]

    atom_cavity = [(g1, 1, "a1r", "0")]
    for j in range(1, k + 1):
        even = 2 * j
        atom_cavity += [(g, even, f"a{even}r", "0"), (g, even, f"a{even}l", "1")]
    for j in range(1, k):
        odd = 2 * j + 1
        atom_cavity += [(g, odd, f"a{odd}r", "1"), (g, odd, f"a{odd}l", "0")]
    atom_cavity.append((gn, n, f"a{n}l", "0"))

    fiber = []
    for j in range(1, k + 1):
        lo, hi = 2 * j - 1, 2 * j
        v_lo, v_hi = config.fiber_coupling(lo), config.fiber_coupling(hi)
        fiber += [(v_lo, f"b{lo}", f"a{lo}r"), (v_lo, f"b{lo}", f"a{lo + 1}r"),
                  (v_hi, f"b{hi}", f"a{hi}l"), (v_hi, f"b{hi}", f"a{hi + 1}l")]
    return drives, atom_cavity, fiber


def _mode_order(atom_cavity, fiber) -> list[str]:
    modes = []
    for term in atom_cavity:
        if term[2] not in modes:
            modes.append(term[2])
    for _, b, a in fiber:
        for m in (b, a):
            if m not in modes:
                modes.append(m)
    return modes


def full_hamiltonian(config: ChainConfig):
    """Sparse H_total on the full truncated Fock space, plus the factor layout."""
    drives, atom_cavity, fiber = hamiltonian_terms(config)
    n = config.n_atoms
    modes = _mode_order(atom_cavity, fiber)
    factors = [3] * n + [2] * len(modes)

    def embed(ops: dict) -> sp.csr_matrix:
        # ops maps factor position -> local operator
        mats = [ops.get(pos, sp.identity(d, format="csr")) for pos, d in enumerate(factors)]
        return reduce(lambda a, b: sp.kron(a, b, format="csr"), mats)

    def mode_pos(name):
        return n + modes.index(name)

    h = sp.csr_matrix((int(np.prod(factors)),) * 2, dtype=complex)
    for omega, atom in drives:
        h = h + omega * embed({atom - 1: _transition("e", "1")})
    for coupling, atom, mode, lower in atom_cavity:
        h = h + coupling * embed({atom - 1: _transition("e", lower), mode_pos(mode): _ANNIHILATE})
    for coupling, bmode, amode in fiber:
        h = h + coupling * embed({mode_pos(bmode): _ANNIHILATE.T, mode_pos(amode): _ANNIHILATE})
    h = h + h.conj().T
    return h.tocsr(), factors, modes


def full_space_oracle(config: ChainConfig, tol: float = 1e-12) -> OracleResult:
    """Project the full-space H_total onto the restricted basis and certify invariance.

    Intended for N=3 (full dimension 1728); N=5 works but takes ~1M states.
    """
    if config.n_atoms > 5:
        raise ConfigError("full-space oracle is limited to n_atoms <= 5")
    h, factors, modes = full_hamiltonian(config)
    n = config.n_atoms

    columns = []
    for state in enumerate_basis(config):
        digits = [LEVELS[a] for a in state.atoms] + [0] * len(modes)
        if state.mode is not None:
            digits[n + modes.index(state.mode)] = 1
        columns.append(int(np.ravel_multi_index(digits, factors)))

    full_dim = h.shape[0]
    b = sp.csr_matrix((np.ones(len(columns)), (columns, np.arange(len(columns)))),
                      shape=(full_dim, len(columns)))
    hb = (h @ b).tocsr()
    projected = hb[columns, :].toarray()
    outside = np.ones(full_dim, dtype=bool)
    outside[columns] = False
    leak = hb[outside, :]
    residual = float(sp.linalg.norm(leak)) if leak.nnz else 0.0
    if residual > tol:
        raise OracleError(f"restricted span not invariant under H_total (residual {residual:.3e})")
    return OracleResult(matrix=projected, residual=residual, full_dim=full_dim)
