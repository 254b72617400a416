"""Zeno subspaces of the atom-cavity-fiber Hamiltonian.

In the Zeno limit (drives much weaker than g and v) the dynamics is confined
to the eigenspaces of H_acf. The zero-eigenvalue space is always spanned by
the two undriven end states and a single dark state with no cavity-photon
amplitude; the drives then act only inside that 3-dimensional space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import ChainConfig
from .errors import ConfigError, DegeneracyError
from .hamiltonian import assemble_acf, assemble_laser, is_hermitian


def fix_phase(vec: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Rotate ``vec`` so its first non-negligible amplitude is real and positive."""
    vec = np.asarray(vec, dtype=complex)
    scale = max(np.abs(vec).max(), 1e-300)
    nz = np.flatnonzero(np.abs(vec) > atol * scale)
    if nz.size == 0:
        return vec.copy()
    lead = vec[nz[0]]
    return vec * (abs(lead) / lead)


@dataclass
class Cluster:
    eigenvalue: float
    projector: np.ndarray
    multiplicity: int
    vectors: np.ndarray  # columns span the eigenspace


@dataclass
class ZenoDecomposition:
    clusters: list
    dark_basis: np.ndarray  # columns: initial, dark state, final
    tol: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([c.eigenvalue for c in self.clusters])

    @property
    def dark_state(self) -> np.ndarray:
        return self.dark_basis[:, 1]

    def zero_cluster(self) -> Cluster:
        return min(self.clusters, key=lambda c: abs(c.eigenvalue))

    def zeno_generator(self, h_drive: np.ndarray) -> np.ndarray:
        """sum_i (lambda_i P_i + P_i H_drive P_i), the Zeno-limit generator."""
        out = np.zeros_like(h_drive, dtype=complex)
        for c in self.clusters:
            out += c.eigenvalue * c.projector + c.projector @ h_drive @ c.projector
        return out

    def restrict_to_dark(self, op: np.ndarray) -> np.ndarray:
        d = self.dark_basis
        return d.conj().T @ op @ d


def default_tolerance(h: np.ndarray) -> float:
    return 1e-8 * max(float(np.abs(h).max()), 1e-300)


def zeno_decompose(h_acf: np.ndarray, tol: float | None = None) -> ZenoDecomposition:
    """Cluster the spectrum of a Hermitian H_acf into eigenprojections.

    Consecutive eigenvalues closer than ``tol`` share a cluster. A gap between
    ``tol`` and ``10 * tol`` is treated as ambiguous and raises
    :class:`DegeneracyError`, as does a zero cluster that is not 3-fold.
    """
    h_acf = np.asarray(h_acf, dtype=complex)
    if not is_hermitian(h_acf, atol=1e-12 * max(1.0, float(np.abs(h_acf).max()))):
        raise ValueError("zeno_decompose needs a Hermitian operator")
    if tol is None:
        tol = default_tolerance(h_acf)
    evals, evecs = np.linalg.eigh(h_acf)

    groups = [[0]]
    for i in range(1, len(evals)):
        gap = evals[i] - evals[i - 1]
        if gap < tol:
            groups[-1].append(i)
        elif gap < 10 * tol:
            raise DegeneracyError(
                f"eigenvalue gap {gap:.3e} is within [tol, 10*tol) for tol={tol:.3e}")
        else:
            groups.append([i])

    clusters = []
    for idx in groups:
        vecs = evecs[:, idx]
        if len(idx) == 1:
            vecs = fix_phase(vecs[:, 0])[:, None]
        clusters.append(Cluster(eigenvalue=float(np.mean(evals[idx])),
                                projector=vecs @ vecs.conj().T,
                                multiplicity=len(idx), vectors=vecs))

    dim = h_acf.shape[0]
    zero = min(clusters, key=lambda c: abs(c.eigenvalue))
    if abs(zero.eigenvalue) >= tol or zero.multiplicity != 3:
        raise DegeneracyError(
            f"expected a 3-fold zero eigenvalue, got {zero.multiplicity}-fold at {zero.eigenvalue:.3e}")
    ends = np.zeros((dim, 2), dtype=complex)
    ends[0, 0] = ends[dim - 1, 1] = 1.0
    rest = zero.projector - ends @ ends.T
    col = int(np.argmax(np.linalg.norm(rest, axis=0)))
    psi1 = rest[:, col] / np.linalg.norm(rest[:, col])
    if abs(psi1[1]) > 1e-12:
        psi1 = psi1 * (abs(psi1[1]) / psi1[1])
    else:
        psi1 = fix_phase(psi1)
    dark = np.column_stack([ends[:, 0], psi1, ends[:, 1]])
    return ZenoDecomposition(clusters=clusters, dark_basis=dark, tol=tol)


def dark_norm(n_atoms: int, g: float, v: float) -> float:
    """Normalization of the uniform-coupling dark state: [N + (N-1)(g/v)^2]^(-1/2)."""
    r = g / v
    return 1.0 / math.sqrt(n_atoms + (n_atoms - 1) * r * r)


def dark_state(config: ChainConfig) -> np.ndarray:
    """Closed-form dark state for uniform couplings.

    +N1 on every excited atom, -(g/v) N1 on every fiber photon.
    """
    if config.has_deviations:
        raise ConfigError("closed-form dark state needs uniform couplings; "
                          "use zeno_decompose(...).dark_state instead")
    n1 = dark_norm(config.n_atoms, config.g, config.v)
    psi = np.zeros(config.dim, dtype=complex)
    for i in range(1, config.n_atoms + 1):
        psi[4 * i - 3] = n1
    for i in range(1, config.n_atoms):
        psi[4 * i - 1] = -(config.g / config.v) * n1
    return psi


def dark_basis(config: ChainConfig, tol: float | None = None) -> np.ndarray:
    """Columns (initial, dark, final); numeric dark state when couplings deviate."""
    if config.has_deviations:
        return zeno_decompose(assemble_acf(config), tol).dark_basis
    d = np.zeros((config.dim, 3), dtype=complex)
    d[0, 0] = d[-1, 2] = 1.0
    d[:, 1] = dark_state(config)
    return d


def effective_hamiltonian(config: ChainConfig, tol: float | None = None) -> np.ndarray:
    """3x3 drive Hamiltonian on (initial, dark, final).

    For uniform couplings the two entries are N1*omega_1 and N1*omega_n.
    """
    d = dark_basis(config, tol)
    h = d.conj().T @ assemble_laser(config) @ d
    # exact zeros off the two couplings; removes roundoff on the diagonal
    out = np.zeros((3, 3), dtype=complex)
    out[0, 1], out[2, 1] = h[0, 1], h[2, 1]
    out[1, 0], out[1, 2] = np.conj(out[0, 1]), np.conj(out[2, 1])
    return out


def embed_dark(coeffs, config: ChainConfig, tol: float | None = None) -> np.ndarray:
    """Map amplitudes on (initial, dark, final) to a full chain state."""
    return dark_basis(config, tol) @ np.asarray(coeffs, dtype=complex)


@dataclass
class ClosedFormEigensystem:
    """Analytic eigensystem of the N=3 atom-cavity-fiber Hamiltonian.

    ``lambdas``, ``norms`` and ``vectors`` are keyed 1..9; vectors are unit
    norm in the 11-state basis, each with +1 as its last raw amplitude.
    """

    g: float
    v: float
    A: float
    lambdas: dict
    coefficients: dict
    norms: dict
    vectors: dict = field(repr=False)

    def matrix(self) -> np.ndarray:
        """Columns psi_1..psi_9 in order."""
        return np.column_stack([self.vectors[i] for i in range(1, 10)])


def closed_form_eigensystem(g: float, v: float) -> ClosedFormEigensystem:
    if not (g > 0 and v > 0):
        raise ConfigError("closed-form eigensystem needs g, v > 0")
    g2, v2 = g * g, v * v
    A = math.sqrt(g2 * g2 + 4 * v2 * v2)
    s2 = math.sqrt(2.0)

    r_lo = math.sqrt(g2 + 2 * v2 - A)
    r_lo3 = math.sqrt(3 * g2 + 2 * v2 - A)
    r_hi = math.sqrt(g2 + 2 * v2 + A)
    r_hi3 = math.sqrt(3 * g2 + 2 * v2 + A)

    c = {
        "epsilon_1": r_lo / (s2 * g),
        "eta_1": (-g2 + 2 * v2 - A) / (2 * g * v),
        "chi_1": r_lo * (g2 + A) / (2 * s2 * g * v2),
        "mu_1": r_lo3 / (s2 * g),
        "zeta_1": (-g2 - 2 * v2 + A) / (2 * g * v),
        "delta_1": r_lo3 * (-g2 + A) / (2 * s2 * g * v2),
        "theta_1": (-g2 + A) / v2,
        "epsilon_2": r_hi / (s2 * g),
        "eta_2": (-g2 + 2 * v2 + A) / (2 * g * v),
        "chi_2": r_hi * (-g2 + A) / (2 * s2 * g * v2),
        "mu_2": r_hi3 / (s2 * g),
        "zeta_2": (g2 + 2 * v2 + A) / (2 * g * v),
        "delta_2": r_hi3 * (g2 + A) / (2 * s2 * g * v2),
        "theta_2": (g2 + A) / v2,
    }
    e1, h1, x1 = c["epsilon_1"], c["eta_1"], c["chi_1"]
    m1, z1, d1, t1 = c["mu_1"], c["zeta_1"], c["delta_1"], c["theta_1"]
    e2, h2, x2 = c["epsilon_2"], c["eta_2"], c["chi_2"]
    m2, z2, d2, t2 = c["mu_2"], c["zeta_2"], c["delta_2"], c["theta_2"]
    r = g / v

    # amplitudes on phi_2 .. phi_10
    raw = {
        1: [1, 0, -r, 0, 1, 0, -r, 0, 1],
        2: [-1, e1, -h1, -x1, 0, x1, h1, -e1, 1],
        3: [-1, -e1, -h1, x1, 0, -x1, h1, e1, 1],
        4: [1, -m1, -z1, d1, -t1, d1, -z1, -m1, 1],
        5: [1, m1, -z1, -d1, -t1, -d1, -z1, m1, 1],
        6: [-1, e2, -h2, x2, 0, -x2, h2, -e2, 1],
        7: [-1, -e2, -h2, -x2, 0, x2, h2, e2, 1],
        8: [1, -m2, z2, -d2, t2, -d2, z2, -m2, 1],
        9: [1, m2, z2, d2, t2, d2, z2, m2, 1],
    }
    # psi_6/7 carry the (g^2+2v^2+A) radicals and psi_8/9 the (3g^2+2v^2+A)
    # ones; eigenvalues are paired with their own vector family.
    lambdas = {
        1: 0.0,
        2: -r_lo / s2, 3: r_lo / s2,
        4: -r_lo3 / s2, 5: r_lo3 / s2,
        6: -r_hi / s2, 7: r_hi / s2,
        8: -r_hi3 / s2, 9: r_hi3 / s2,
    }
    norms, vectors = {}, {}
    for i, amps in raw.items():
        vec = np.zeros(11, dtype=complex)
        vec[1:10] = amps
        norms[i] = 1.0 / float(np.linalg.norm(vec))
        vectors[i] = norms[i] * vec
    return ClosedFormEigensystem(g=g, v=v, A=A, lambdas=lambdas, coefficients=c,
                                 norms=norms, vectors=vectors)
