import numpy as np
import pytest

from kaonbell import DomainError, bell_state, named_state, preset
from kaonbell.diagrams import (
    SCENARIOS,
    mems_curve,
    mems_density_matrix,
    mems_purity_norm,
    s_curve,
    trajectory,
    werner_curve,
    werner_density_matrix,
    werner_purity_norm,
)
from kaonbell.entanglement import wootters_concurrence


class TestReferenceCurves:
    def test_werner_curve_shape_and_range(self):
        curve = werner_curve(100)
        assert len(curve) == 100
        purs, cons = zip(*curve)
        assert purs[0] == pytest.approx(1.0 / 9.0)
        assert purs[-1] == pytest.approx(1.0)
        assert cons[0] == pytest.approx(0.0)
        assert cons[-1] == pytest.approx(1.0)

    def test_werner_curve_against_density_matrix(self):
        # self-oracle: recompute purity and concurrence from the explicit state
        for p in np.linspace(1.0 / 3.0, 1.0, 11):
            rho = werner_density_matrix(float(p))
            raw = float(np.sum(rho * rho))
            norm = (4.0 * raw - 1.0) / 3.0
            c = wootters_concurrence(rho).value
            assert norm == pytest.approx(float(p * p), abs=1e-12)
            assert werner_purity_norm(c) == pytest.approx(norm, abs=1e-10)

    def test_mems_curve_against_density_matrix(self):
        for c in np.linspace(0.0, 1.0, 11):
            rho = mems_density_matrix(float(c))
            assert np.trace(rho) == pytest.approx(1.0)
            raw = float(np.sum(rho * rho))
            assert mems_purity_norm(float(c)) == pytest.approx(
                (4.0 * raw - 1.0) / 3.0, abs=1e-12)

    def test_mems_dominates_random_states(self):
        # no physical two-qubit state may lie above the MEMS boundary:
        # at fixed concurrence the MEMS purity is minimal, i.e. every state
        # with the same concurrence has purity >= the curve value
        rng = np.random.default_rng(0)
        for _ in range(200):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
            c = wootters_concurrence(rho).value
            norm = (4.0 * float(np.sum(np.abs(rho) ** 2)) - 1.0) / 3.0
            assert norm >= mems_purity_norm(c) - 1e-3

    def test_curve_validation(self):
        with pytest.raises(DomainError):
            werner_curve(1)
        with pytest.raises(DomainError):
            mems_curve(0)


class TestTrajectory:
    def test_row_count_matches_grid(self, kaon):
        points = trajectory(bell_state("phi+"), "equal-times", kaon,
                            t_end=1.0, step=0.05)
        assert len(points) == 21
        assert points[0].t == 0.0
        assert points[-1].t == pytest.approx(1.0)

    def test_starts_pure_and_maximally_entangled(self, kaon):
        points = trajectory(bell_state("phi+"), "equal-times", kaon,
                            t_end=0.5, step=0.25)
        assert points[0].purity_norm == pytest.approx(1.0)
        assert points[0].concurrence_raw == pytest.approx(1.0)
        assert points[0].concurrence_renorm == pytest.approx(1.0)

    def test_raw_concurrence_decays(self, kaon):
        points = trajectory(bell_state("phi+"), "equal-times", kaon,
                            t_end=5.0, step=0.5)
        cs = [p.concurrence_raw for p in points]
        assert all(b <= a + 1e-12 for a, b in zip(cs, cs[1:]))

    def test_all_scenarios_run(self, kaon):
        for scenario in SCENARIOS:
            points = trajectory(named_state("xi"), scenario, kaon,
                                t_end=0.2, step=0.1)
            assert len(points) == 3

    def test_unknown_scenario(self, kaon):
        with pytest.raises(DomainError):
            trajectory(bell_state("phi+"), "diagonal", kaon, t_end=1, step=0.5)

    def test_step_validation(self, kaon):
        with pytest.raises(DomainError):
            trajectory(bell_state("phi+"), "equal-times", kaon, t_end=1, step=0)


class TestSCurve:
    def test_shape_and_peak(self, kaon):
        rows = s_curve(named_state("xi"), (0.0, 0.0, 5.77, 5.77), kaon,
                       u_max=2.0, n_points=101)
        assert len(rows) == 101
        us, ss = zip(*rows)
        assert us[0] == 0.0 and us[-1] == pytest.approx(2.0)
        # the u = 1 point is the reference optimum and must violate
        s_at_one = ss[us.index(1.0)]
        assert s_at_one > 2.1

    def test_all_zero_times_rejected(self, kaon):
        with pytest.raises(DomainError):
            s_curve(named_state("xi"), (0.0, 0.0, 0.0, 0.0), kaon)
