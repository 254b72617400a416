"""Dense Hamiltonians on the restricted chain basis.

Every operator is a plain ``(4N-1, 4N-1)`` complex ndarray in the canonical
order of :func:`zenoghz.basis.enumerate_basis`. All couplings are real and
non-negative, so the Hermitian parts are real symmetric.
"""
from __future__ import annotations

import numpy as np

from .basis import ChainConfig, Kind, enumerate_basis


def acf_edges(config: ChainConfig) -> list[tuple[int, int, float]]:
    """Weighted edges (i, j, w) of the atom-cavity-fiber path graph."""
    edges = []
    for i in range(1, config.n_atoms):
        e_here = 4 * i - 3
        c_out, fib, c_in, e_next = e_here + 1, e_here + 2, e_here + 3, e_here + 4
        v = config.fiber_coupling(i)
        edges += [
            (e_here, c_out, config.atom_cavity_coupling(i)),
            (c_out, fib, v),
            (fib, c_in, v),
            (c_in, e_next, config.atom_cavity_coupling(i + 1)),
        ]
    return edges


def assemble_laser(config: ChainConfig) -> np.ndarray:
    """Drive on atoms 1 and N: couples initial <-> e_1 and final <-> e_N."""
    h = np.zeros((config.dim, config.dim), dtype=complex)
    last = config.dim - 1
    h[0, 1] = h[1, 0] = config.omega_1
    h[last, last - 1] = h[last - 1, last] = config.omega_n
    return h


def assemble_acf(config: ChainConfig) -> np.ndarray:
    """Atom-cavity plus cavity-fiber exchange: a weighted path on indices 1..4N-3."""
    h = np.zeros((config.dim, config.dim), dtype=complex)
    for i, j, w in acf_edges(config):
        h[i, j] = h[j, i] = w
    return h


def assemble_total(config: ChainConfig) -> np.ndarray:
    return assemble_laser(config) + assemble_acf(config)


def decay_rates(config: ChainConfig) -> np.ndarray:
    """Per-basis-state decay rate: gamma on e_i, kappa_c on cavity, kappa_f on fiber."""
    rate = {
        Kind.ATOM_EXCITED: config.gamma,
        Kind.CAVITY_PHOTON: config.kappa_c,
        Kind.FIBER_PHOTON: config.kappa_f,
    }
    return np.array([rate.get(s.kind, 0.0) for s in enumerate_basis(config)])


def assemble_decoherent(config: ChainConfig) -> np.ndarray:
    """Non-Hermitian H_total - (i/2) diag(decay rates)."""
    return assemble_total(config) - 0.5j * np.diag(decay_rates(config))


def is_hermitian(h: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(h, h.conj().T, rtol=0.0, atol=atol))
