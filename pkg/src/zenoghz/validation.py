"""Self-check suite behind ``zenoghz validate``.

Each check returns a :class:`Check`; the suite exercises the full-space
oracle, the closed-form N=3 eigensystem, and structural invariants on
randomized chains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import ChainConfig
from .dynamics import analytic_dark_evolution, evolve, fidelity
from .hamiltonian import acf_edges, assemble_acf, assemble_decoherent, assemble_laser, assemble_total
from .oracle import full_space_oracle
from .protocol import ghz_pulse_time, ghz_target, run_ghz
from .zeno import closed_form_eigensystem, dark_norm, dark_state, fix_phase, zeno_decompose


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def random_config(rng: np.random.Generator, n_atoms: int | None = None, decay: bool = True) -> ChainConfig:
    """Random chain with v/g in [0.5, 2].

    Far outside that window long chains split into nearly isolated
    atom-cavity dimers whose eigenvalues crowd below the clustering tolerance.
    """
    n = n_atoms if n_atoms is not None else int(rng.choice([3, 5, 7]))
    g = rng.uniform(0.5, 2.0)
    v = g * rng.uniform(0.5, 2.0)
    return ChainConfig(
        n_atoms=n,
        g=g,
        v=v,
        omega_n=rng.uniform(0.0, 0.2),
        omega_1=rng.uniform(0.0, 0.2),
        gamma=rng.uniform(0.0, 0.02) if decay else 0.0,
        kappa_c=rng.uniform(0.0, 0.02) if decay else 0.0,
        kappa_f=rng.uniform(0.0, 0.02) if decay else 0.0,
        g_dev=tuple(rng.uniform(-0.1, 0.1, 2) * g),
        v_dev=tuple(rng.uniform(-0.1, 0.1, n - 1) * v),
    )


def check_oracle(rng, trials: int = 3) -> Check:
    worst_diff = worst_res = 0.0
    for _ in range(trials):
        c = random_config(rng, n_atoms=3, decay=False)
        res = full_space_oracle(c)
        worst_diff = max(worst_diff, float(np.abs(res.matrix - assemble_total(c)).max()))
        worst_res = max(worst_res, res.residual)
    ok = worst_diff < 1e-12 and worst_res < 1e-12
    return Check("oracle equivalence (N=3)", ok, f"max|diff|={worst_diff:.1e} residual={worst_res:.1e}")


def closed_form_error(g: float, v: float) -> tuple[float, float]:
    """Largest eigenvalue and eigenvector mismatch between closed form and numerics."""
    cf = closed_form_eigensystem(g, v)
    h = assemble_acf(ChainConfig(g=g, v=v))
    num = np.sort(np.linalg.eigvalsh(h))
    ana = np.sort(np.array(list(cf.lambdas.values()) + [0.0, 0.0]))
    ev_err = float(np.abs(num - ana).max())
    dec = zeno_decompose(h)
    vec_err = 0.0
    for i in range(2, 10):
        cluster = min(dec.clusters, key=lambda c: abs(c.eigenvalue - cf.lambdas[i]))
        vec_err = max(vec_err, float(np.abs(fix_phase(cf.vectors[i]) - cluster.vectors[:, 0]).max()))
    vec_err = max(vec_err, float(np.abs(cf.vectors[1] - dec.dark_state).max()))
    return ev_err, vec_err


def check_closed_form(rng, trials: int = 20) -> Check:
    worst = 0.0
    for _ in range(trials):
        worst = max(worst, *closed_form_error(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)))
    return Check("closed-form N=3 eigensystem", worst < 1e-10, f"max err={worst:.1e}")


def invariant_errors(c: ChainConfig, rng) -> dict:
    """Worst violation of each structural invariant for one configuration."""
    h_l, h_acf, h_tot = assemble_laser(c), assemble_acf(c), assemble_total(c)
    err = {"hermiticity": max(float(np.abs(m - m.conj().T).max()) for m in (h_l, h_acf, h_tot))}

    dec = zeno_decompose(h_acf)
    eye = np.eye(c.dim)
    projs = [cl.projector for cl in dec.clusters]
    err["completeness"] = float(np.abs(sum(projs) - eye).max())
    worst = 0.0
    for i, p in enumerate(projs):
        worst = max(worst, float(np.abs(p @ p - p).max()))
        for q in projs[i + 1:]:
            worst = max(worst, float(np.abs(p @ q).max()))
    err["projectors"] = worst

    lam2 = sum(cl.multiplicity * cl.eigenvalue ** 2 for cl in dec.clusters)
    err["trace identity"] = abs(lam2 - float(np.trace(h_acf @ h_acf).real))
    edge_sum = 2 * sum(w * w for _, _, w in acf_edges(c))
    err["trace identity"] = max(err["trace identity"], abs(edge_sum - float(np.trace(h_acf @ h_acf).real)))
    err["zero multiplicity"] = float(dec.zero_cluster().multiplicity != 3)

    psi0 = rng.normal(size=c.dim) + 1j * rng.normal(size=c.dim)
    psi0 /= np.linalg.norm(psi0)
    herm = evolve(h_tot, psi0, 50.0, 21, hermitian=True)
    err["norm conservation"] = float(np.abs(herm.norms - 1.0).max())
    dec_traj = evolve(assemble_decoherent(c), psi0, 50.0, 21, hermitian=False)
    err["norm decay"] = max(0.0, float(np.diff(dec_traj.norms).max()))
    if not c.has_deviations:
        err["dark state"] = float(np.linalg.norm(h_acf @ dark_state(c)))
    return err


INVARIANT_TOL = {
    "hermiticity": 1e-12,
    "completeness": 1e-10,
    "projectors": 1e-10,
    "trace identity": 1e-9,
    "zero multiplicity": 0.5,
    "norm conservation": 1e-9,
    "norm decay": 1e-9,
    "dark state": 1e-12,
}


def check_invariants(rng, trials: int = 200) -> list:
    worst = {k: 0.0 for k in INVARIANT_TOL}
    for t in range(trials):
        c = random_config(rng)
        if t % 4 == 0:
            c = c.replace(g_dev=(0.0, 0.0), v_dev=(0.0,) * (c.n_atoms - 1))
        for k, e in invariant_errors(c, rng).items():
            worst[k] = max(worst[k], e)
    return [Check(f"invariant: {k}", worst[k] < INVARIANT_TOL[k], f"worst={worst[k]:.1e} over {trials}")
            for k in INVARIANT_TOL]


def check_ghz_headline() -> list:
    c = ChainConfig(n_atoms=3, g=1.0, v=1.0, omega_n=0.04)
    report = run_ghz(c)
    n1 = dark_norm(3, 1.0, 1.0)
    amps = analytic_dark_evolution(ghz_pulse_time(c), c.omega_1, c.omega_n, n1)
    ideal = fidelity(np.array([-1, 0, -1]) / math.sqrt(2), amps)
    freeze = float(np.linalg.norm(assemble_acf(c) @ ghz_target(c)))
    return [
        Check("GHZ fidelity (N=3, omega_3=0.04g)", report.fidelity >= 0.97, f"F={report.fidelity:.6f}"),
        Check("analytic GHZ fidelity", abs(ideal - 1.0) < 1e-10, f"F={ideal:.12f}"),
        Check("GHZ target is dark", freeze < 1e-10, f"|H_acf psi|={freeze:.1e}"),
    ]


def run_checks(n_random: int = 200, seed: int = 20120523) -> list:
    rng = np.random.default_rng(seed)
    checks = [check_oracle(rng), check_closed_form(rng)]
    checks += check_invariants(rng, n_random)
    checks += check_ghz_headline()
    return checks
