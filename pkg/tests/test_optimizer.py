import numpy as np
import pytest

from kaonbell import (
    BellConfiguration,
    DomainError,
    SearchSpace,
    bell_state,
    maximize_s,
    maximize_s_fixed_state,
    named_state,
    random_time_scan,
    s_value,
)
from kaonbell.optimizer import _nelder_mead


class TestSearchSpace:
    def test_dimensions(self):
        assert SearchSpace().dimension == 7
        assert SearchSpace(free_phases=True).dimension == 10
        assert SearchSpace(fixed_state=bell_state("psi-")).dimension == 4

    def test_decode_unit_norm(self):
        rng = np.random.default_rng(0)
        for free in (False, True):
            space = SearchSpace(free_phases=free)
            lo, hi = space.bounds()
            for _ in range(50):
                x = lo + rng.uniform(size=space.dimension) * (hi - lo)
                psi, times = space.decode(x)
                assert sum(r * r for r in psi.r) == pytest.approx(1.0, abs=1e-12)
                assert len(times) == 4
                if free:
                    assert psi.phi[3] == 0.0

    def test_invalid_t_max(self):
        with pytest.raises(DomainError):
            SearchSpace(t_max=0.0)


class TestNelderMead:
    def test_minimizes_quadratic(self):
        f = lambda x: float(np.sum((x - 0.3) ** 2))
        lo, hi = np.zeros(3), np.ones(3)
        x, fx, nfev = _nelder_mead(f, np.array([0.9, 0.1, 0.5]), lo, hi, 2000)
        assert fx < 1e-12
        assert np.allclose(x, 0.3, atol=1e-5)

    def test_respects_bounds(self):
        f = lambda x: float(-x[0])  # pushes to the upper bound
        lo, hi = np.zeros(2), np.ones(2)
        x, fx, _ = _nelder_mead(f, np.array([0.5, 0.5]), lo, hi, 500)
        assert x[0] <= 1.0 + 1e-15


class TestMaximizeS:
    def test_deterministic_for_fixed_seed(self, kaon):
        a = maximize_s(SearchSpace(), kaon, budget=5_000, seed=7, n_starts=10)
        b = maximize_s(SearchSpace(), kaon, budget=5_000, seed=7, n_starts=10)
        assert a.best_s == b.best_s
        assert a.best_times == b.best_times

    def test_budget_monotone(self, kaon):
        small = maximize_s(SearchSpace(), kaon, budget=3_000, seed=1, n_starts=10)
        large = maximize_s(SearchSpace(), kaon, budget=30_000, seed=1, n_starts=10)
        assert large.best_s >= small.best_s - 1e-12
        assert small.n_evals <= 3_000 + small.n_starts  # slack for final simplex evals

    def test_matrix_path_revalidation(self, kaon):
        result = maximize_s(SearchSpace(), kaon, budget=20_000, seed=0, n_starts=20)
        direct = s_value(result.best_state, BellConfiguration(*result.best_times),
                         kaon, path="matrix")
        assert result.matrix_path_s == pytest.approx(direct, abs=1e-12)
        assert result.matrix_path_s == pytest.approx(result.best_s, abs=1e-9)

    def test_fixed_state_recovers_reference(self, kaon):
        result = maximize_s_fixed_state(named_state("xi"), kaon, budget=30_000,
                                        seed=0, n_starts=30)
        assert result.best_s >= 2.11

    def test_target_early_stop_uses_fewer_evals(self, kaon):
        full = maximize_s(SearchSpace(), kaon, budget=100_000, seed=0, n_starts=100)
        early = maximize_s(SearchSpace(), kaon, budget=100_000, seed=0,
                           n_starts=100, target=2.05)
        assert early.best_s >= 2.05
        assert early.n_evals <= full.n_evals

    def test_parallel_matches_serial_best(self, kaon):
        serial = maximize_s(SearchSpace(), kaon, budget=10_000, seed=3, n_starts=8)
        parallel = maximize_s(SearchSpace(), kaon, budget=10_000, seed=3,
                              n_starts=8, n_jobs=2)
        assert parallel.best_s == pytest.approx(serial.best_s, abs=1e-12)

    def test_invalid_arguments(self, kaon):
        with pytest.raises(DomainError):
            maximize_s(SearchSpace(), kaon, budget=0)
        with pytest.raises(DomainError):
            maximize_s(SearchSpace(), kaon, n_starts=0)

    def test_as_dict_roundtrip(self, kaon):
        result = maximize_s(SearchSpace(), kaon, budget=3_000, seed=0, n_starts=5)
        d = result.as_dict()
        assert d["best_s"] == result.best_s
        assert len(d["state"]["r"]) == 4
        assert len(d["times"]) == 4


class TestRandomTimeScan:
    def test_singlet_never_violates(self, kaon):
        best = random_time_scan(bell_state("psi-"), kaon, n_samples=20_000,
                                t_max=30.0, seed=0, n_refine=5)
        assert best <= 2.0 + 1e-3

    def test_deterministic(self, kaon):
        a = random_time_scan(named_state("xi"), kaon, n_samples=5_000, seed=2,
                             n_refine=3)
        b = random_time_scan(named_state("xi"), kaon, n_samples=5_000, seed=2,
                             n_refine=3)
        assert a == b

    def test_finds_violation_for_xi(self, kaon):
        best = random_time_scan(named_state("xi"), kaon, n_samples=20_000,
                                t_max=20.0, seed=0, n_refine=10)
        assert best > 2.1
