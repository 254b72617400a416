import math

import numpy as np
import pytest

from zenoghz.basis import ChainConfig
from zenoghz.errors import ConfigError
from zenoghz.protocol import (
    ROTATION_X,
    Axis,
    apply_param,
    atomic_register,
    compare_effective,
    concurrence,
    epr_reduce,
    ghz_pulse_time,
    ghz_register,
    ghz_target,
    pulse_time_seconds,
    run_ghz,
    scan_drive_ratio,
    sweep,
)

OPERATING = ChainConfig(n_atoms=3, g=1.0, v=1.0, omega_n=0.04)
TAU_OPERATING = math.pi * math.sqrt(5) / (0.04 * math.sqrt(4 + 2 * math.sqrt(2)))


def test_pulse_time_closed_form():
    assert ghz_pulse_time(OPERATING) == pytest.approx(TAU_OPERATING, rel=1e-13)
    assert TAU_OPERATING == pytest.approx(67.2070053251, rel=1e-10)


def test_pulse_time_scales_with_g():
    # the pulse time depends on g and v only through g/v
    c = OPERATING.replace(g=2.0, v=2.0)
    assert ghz_pulse_time(c) == pytest.approx(TAU_OPERATING, rel=1e-12)
    c5 = ChainConfig(n_atoms=5, omega_n=0.04)
    assert ghz_pulse_time(c5) == pytest.approx(3 * math.pi / (0.04 * math.sqrt(4 + 2 * math.sqrt(2))))


def test_pulse_time_needs_both_drives():
    with pytest.raises(ConfigError):
        ghz_pulse_time(OPERATING.replace(omega_1=0.0))


def test_pulse_time_seconds():
    assert pulse_time_seconds(OPERATING) is None
    c = OPERATING.replace(frequency_unit=2 * math.pi * 750e6)
    assert pulse_time_seconds(c) == pytest.approx(TAU_OPERATING / (2 * math.pi * 750e6))


def test_run_ghz_operating_point():
    r = run_ghz(OPERATING)
    assert r.fidelity == pytest.approx(0.993036, abs=5e-6)
    assert r.tau_gt == pytest.approx(TAU_OPERATING)
    assert r.final_norm == pytest.approx(1.0, abs=1e-12)
    assert r.trajectory.times[-1] == pytest.approx(r.tau)
    assert len(r.trajectory.times) == 2001


def test_run_ghz_weaker_drive_is_better():
    f = [run_ghz(OPERATING.replace(omega_n=w, omega_1=None), keep_trajectory=False).fidelity
         for w in (0.005, 0.02, 0.04, 0.08)]
    assert f == sorted(f, reverse=True)
    assert f[0] > 0.999


def test_run_ghz_tau_override():
    r = run_ghz(OPERATING, tau=10.0, n_samples=2)
    assert r.tau == 10.0
    assert r.fidelity < 0.5


def test_decoherence_loses_norm():
    r = run_ghz(OPERATING.replace(gamma=0.01), use_decoherence=True, n_samples=11)
    assert r.final_norm < 1.0
    assert not r.trajectory.hermitian


class TestRegisters:
    def test_ghz_register(self):
        reg = ghz_register(3)
        assert reg[0b100] == reg[0b011] == pytest.approx(-1 / math.sqrt(2))
        assert np.linalg.norm(reg) == pytest.approx(1.0)

    def test_atomic_register_from_target(self):
        np.testing.assert_allclose(atomic_register(ghz_target(OPERATING), OPERATING), ghz_register(3))

    def test_atomic_register_empty(self):
        psi = np.zeros(11, dtype=complex)
        psi[5] = 1
        with pytest.raises(ValueError):
            atomic_register(psi, OPERATING)

    def test_concurrence(self):
        bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
        assert concurrence(bell) == pytest.approx(1.0)
        assert concurrence(np.array([1, 0, 0, 0])) == 0.0
        assert concurrence(np.array([1, 1, 1, 1]) / 2) == pytest.approx(0.0, abs=1e-15)
        with pytest.raises(ValueError):
            concurrence(np.ones(8))

    def test_rotation_unitary(self):
        np.testing.assert_allclose(ROTATION_X @ ROTATION_X.conj().T, np.eye(2), atol=1e-15)


class TestEpr:
    @pytest.mark.parametrize("n", [3, 5])
    @pytest.mark.parametrize("atom", [1, 2, 3])
    def test_ideal_register(self, n, atom):
        res = epr_reduce(ghz_register(n), atom)
        assert res.probabilities == pytest.approx((0.5, 0.5), abs=1e-14)
        assert res.flagged == ()
        if n == 3:
            for b in res.branches.values():
                assert concurrence(b) == pytest.approx(1.0, abs=1e-12)

    def test_middle_atom_branch_states(self):
        # rotating atom 2 of -(|100> + |011>)/sqrt2 leaves the outer pair in
        # -(|10> + i|01>)/sqrt2 or -(i|10> + |01>)/sqrt2
        res = epr_reduce(ghz_register(3), 2)
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(res.branches[0], [0, -1j * s, -s, 0], atol=1e-15)
        np.testing.assert_allclose(res.branches[1], [0, -s, -1j * s, 0], atol=1e-15)

    def test_product_state_flags_outcome(self):
        reg = np.zeros(8, dtype=complex)
        reg[0] = 1.0
        res = epr_reduce(reg, 1)
        assert res.probabilities == pytest.approx((0.5, 0.5))
        # the rotation maps (1, -i)/sqrt2 to |0> and (1, i)/sqrt2 to i|1>
        res = epr_reduce(np.kron([1, -1j], np.eye(4)[0]) / math.sqrt(2), 1)
        assert res.flagged == (1,)
        assert res.branches[1] is None
        np.testing.assert_allclose(res.branches[0], np.eye(4)[0], atol=1e-15)
        res = epr_reduce(np.kron([1, 1j], np.eye(4)[0]) / math.sqrt(2), 1)
        assert res.flagged == (0,)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            epr_reduce(np.ones(6), 1)
        with pytest.raises(ValueError):
            epr_reduce(ghz_register(3), 4)


class TestSweep:
    def test_apply_param(self):
        c = apply_param(OPERATING, "omega_3", 0.08)
        assert c.omega_1 == pytest.approx(0.08 * (math.sqrt(2) + 1))
        assert apply_param(OPERATING, "delta_g3", 0.1).g_dev == (0.0, 0.1)
        assert apply_param(OPERATING, "delta_gN", 0.1).g_dev == (0.0, 0.1)
        assert apply_param(OPERATING, "delta_g1", -0.1).g_dev == (-0.1, 0.0)
        assert apply_param(OPERATING, "delta_v2", 0.05).v_dev == (0.0, 0.05)
        assert apply_param(OPERATING, "kappa_f", 0.01).kappa_f == 0.01
        for bad in ("delta_v3", "delta_v0", "omega_5", "delta_g2", "temperature"):
            with pytest.raises(ConfigError):
                apply_param(OPERATING, bad, 0.1)

    def test_grid_order_and_jobs_invariance(self):
        a1 = Axis.linspace("delta_g1", -0.1, 0.1, 3)
        a2 = Axis("v", np.array([0.5, 1.0]))
        serial = sweep(OPERATING, a1, a2, n_samples=2)
        parallel = sweep(OPERATING, a1, a2, n_samples=2, jobs=2)
        np.testing.assert_array_equal(serial.grid, parallel.grid)
        assert serial.header == ["delta_g1", "v", "fidelity"]
        rows = list(serial.rows())
        assert [r[:2] for r in rows] == [(-0.1, 0.5), (-0.1, 1.0), (0.0, 0.5), (0.0, 1.0),
                                         (0.1, 0.5), (0.1, 1.0)]
        single = run_ghz(apply_param(apply_param(OPERATING, "delta_g1", 0.1), "v", 0.5), n_samples=2)
        assert rows[4][2] == single.fidelity

    def test_one_dimensional(self):
        res = sweep(OPERATING, Axis("gamma", np.array([0.0, 0.01])), observable="final_norm",
                    use_decoherence=True, n_samples=2)
        assert res.grid.shape == (2,)
        assert res.grid[0] == pytest.approx(1.0) and res.grid[1] < 1.0

    def test_bad_observable(self):
        with pytest.raises(ConfigError):
            sweep(OPERATING, Axis("g", np.array([1.0])), observable="entropy")
        with pytest.raises(ConfigError):
            Axis.linspace("g", 0, 1, 0)


def test_compare_effective_small_drive_converges():
    strong = compare_effective(OPERATING, n_samples=401).max_deviation
    weak = compare_effective(OPERATING.replace(omega_n=0.01, omega_1=None), n_samples=401).max_deviation
    assert weak < strong
    assert weak < 0.01


def test_drive_ratio_optimum():
    ratios = np.array([1.0, 2.0, math.sqrt(2) + 1, 3.0])
    f = scan_drive_ratio(OPERATING, ratios)
    assert f[2] == pytest.approx(1.0, abs=1e-12)
    assert np.all(f[[0, 1, 3]] < 1.0 - 1e-3)
