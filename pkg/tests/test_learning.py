from itertools import combinations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from pandemic_growth.core.errors import ConfigurationError, DimensionMismatch, InsufficientHistory
from pandemic_growth.learning import (
    LearningDiagnostics, LearningMode, LearningOptions, NnlsProblem, build_interstate_problems,
    build_quarantined_problems, first_learnable_day, kkt_violation, learn_gain_set, learn_gains, solve_nnls,
)
from pandemic_growth.timeseries import PandemicSeries


def problem(A, b, w=None, ridge=0.0):
    b = np.asarray(b, dtype=np.float64)
    return NnlsProblem(A=A, b=b, w=np.ones(b.shape[0]) if w is None else w, ridge=ridge)


def brute_force_objective(p: NnlsProblem) -> float:
    """Best objective over every support set whose least-squares fit is non-negative"""
    root_w = np.sqrt(p.w)
    A, b = p.A * root_w[:, None], p.b * root_w
    n = A.shape[1]
    best = p.objective(np.zeros(n))
    for size in range(1, n + 1):
        for support in combinations(range(n), size):
            x = np.zeros(n)
            x[list(support)] = np.linalg.lstsq(A[:, support], b, rcond=None)[0]
            if np.all(x >= 0):
                best = min(best, p.objective(x))
    return best


class TestNnls:
    def test_identity_clips_negative_target(self):
        solution = solve_nnls(problem(np.eye(2), [1.0, -1.0]))
        assert_allclose(solution.x, [1.0, 0.0])
        assert solution.converged

    def test_single_column_mean(self):
        solution = solve_nnls(problem([[1.0], [1.0]], [1.0, 2.0]))
        assert solution.x[0] == pytest.approx(1.5)
        assert solution.residual_norm == pytest.approx(np.sqrt(0.5))

    def test_weights_shift_the_fit(self):
        solution = solve_nnls(problem([[1.0], [1.0]], [1.0, 2.0], w=np.array([3.0, 1.0])))
        assert solution.x[0] == pytest.approx(1.25)

    def test_ridge_shrinks(self):
        solution = solve_nnls(problem([[1.0]], [2.0], ridge=1.0))
        assert solution.x[0] == pytest.approx(1.0)

    def test_zero_design(self):
        solution = solve_nnls(problem(np.zeros((3, 2)), [1.0, 2.0, 3.0]))
        assert_array_equal(solution.x, [0.0, 0.0])
        assert solution.ill_conditioned
        assert solution.converged

    def test_max_iter_returns_current_iterate(self):
        solution = solve_nnls(problem(np.eye(2), [1.0, 1.0]), max_iter=0)
        assert not solution.converged
        assert_array_equal(solution.x, [0.0, 0.0])

    def test_underdetermined_flag(self):
        assert problem(np.ones((1, 3)), [1.0]).underdetermined

    @pytest.mark.parametrize("kwargs", [
        {"A": np.ones((2, 2)), "b": np.ones(3), "w": np.ones(2)},
        {"A": np.ones((2, 2)), "b": np.ones(2), "w": np.array([1.0, 0.0])},
        {"A": np.array([[np.nan, 1.0]]), "b": np.ones(1), "w": np.ones(1)},
    ])
    def test_invalid_problems(self, kwargs):
        with pytest.raises(DimensionMismatch):
            NnlsProblem(**kwargs)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            m, n = int(rng.integers(1, 11)), int(rng.integers(1, 7))
            p = problem(rng.normal(size=(m, n)), rng.normal(size=m), w=rng.uniform(0.5, 2.0, size=m))
            solution = solve_nnls(p)
            assert np.all(solution.x >= 0)
            assert solution.objective <= brute_force_objective(p) + 1e-9 * max(1.0, solution.objective)
            assert solution.kkt_violation <= 1e-10

    def test_kkt_violation_is_zero_at_the_optimum(self):
        p = problem(np.eye(2), [1.0, -1.0])
        assert kkt_violation(p, np.array([1.0, 0.0])) == pytest.approx(0.0)
        assert kkt_violation(p, np.array([0.0, 0.0])) == pytest.approx(1.0)

    def test_reported_violation_is_absolute(self):
        p = problem(1e3 * np.eye(2), [1e3, -1e3])
        assert kkt_violation(p, np.zeros(2)) == pytest.approx(1e6)
        solution = solve_nnls(p)
        assert_allclose(solution.x, [1.0, 0.0])
        assert solution.kkt_scale == pytest.approx(2e6)
        assert solution.kkt_violation <= 1e-10

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        p = problem(rng.normal(size=(6, 4)), rng.normal(size=6))
        assert_array_equal(solve_nnls(p).x, solve_nnls(p).x)


class TestProblems:
    def test_first_learnable_day(self):
        assert first_learnable_day(14, 14) == 28
        assert LearningOptions(n_tau=4).first_day == 8

    def test_quarantined_shapes(self, planted_series):
        problems = build_quarantined_problems(planted_series, 20, 4, 6)
        assert len(problems) == 3 and len(problems[0]) == 3
        assert problems[0][0].shape == (6, 4)

    def test_quarantined_design_holds_lagged_actives(self, planted_series):
        p = build_quarantined_problems(planted_series, 20, 4, 4)[1][0]
        actives = planted_series.actives()[1]
        # last residual day is k=20; lag h sits in column h-1
        assert_allclose(p.A[-1], actives[[18, 17, 16, 15]])
        assert p.b[-1] == planted_series.state("NY", 20)[0] - planted_series.state("NY", 19)[0]

    def test_interstate_column_order(self, planted_series):
        p = build_interstate_problems(planted_series, 20, 4, 4)[0][0]
        actives = planted_series.actives()
        assert p.shape == (4, 12)
        assert p.A[-1, 2 * 4 + 0] == actives[2, 18]
        assert p.A[-1, 1 * 4 + 3] == actives[1, 15]

    def test_day_before_first_learnable(self, planted_series):
        with pytest.raises(InsufficientHistory) as info:
            build_quarantined_problems(planted_series, 7, 4, 4)
        assert info.value.minimum_day == 8


class TestLearner:
    def test_recovers_planted_quarantined_gains(self, planted_series, planted_gains):
        learned = learn_gains(planted_series, 20, LearningMode.QUARANTINED, LearningOptions(n_tau=4, fit_days=4))
        assert_allclose(learned.values, planted_gains.values, atol=1e-6)
        assert learned.day == 20
        assert learned.mode == "quarantined"

    def test_quarantined_off_diagonal_is_zero(self, planted_series):
        learned = learn_gains(planted_series, 25, LearningMode.QUARANTINED, LearningOptions(n_tau=4))
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert not learned.values[i, j].any()

    def test_recovers_planted_interstate_gains(self, interstate_series, interstate_gains):
        learned = learn_gains(interstate_series, 10, LearningMode.INTERSTATE, LearningOptions(n_tau=2, fit_days=4))
        assert_allclose(learned.values, interstate_gains.values, atol=1e-6)

    def test_uses_only_past_days(self, planted_series):
        opts = LearningOptions(n_tau=4, fit_days=6)
        full = learn_gains(planted_series, 18, opts=opts)
        cut = learn_gains(planted_series.truncated(18), 18, opts=opts)
        assert_array_equal(full.values, cut.values)

    def test_underdetermined_interstate_is_flagged(self, planted_series):
        diagnostics = LearningDiagnostics()
        learn_gains(planted_series, 20, LearningMode.INTERSTATE, LearningOptions(n_tau=4, fit_days=4), diagnostics)
        assert diagnostics.problems == 9
        assert diagnostics.underdetermined == 9
        assert diagnostics.has_warnings

    @pytest.mark.parametrize("factor", [1e-3, 1e3])
    def test_gains_do_not_depend_on_the_population_scale(self, planted_series, factor):
        opts = LearningOptions(n_tau=4, fit_days=6)
        base = learn_gains(planted_series, 20, opts=opts)
        rescaled = PandemicSeries(planted_series.registry, planted_series.calendar, planted_series.totals * factor)
        assert_allclose(learn_gains(rescaled, 20, opts=opts).values, base.values, rtol=1e-8, atol=1e-10)

    def test_single_mode_only(self, planted_series):
        with pytest.raises(ConfigurationError):
            learn_gains(planted_series, 20, LearningMode.BLENDED)

    def test_gain_sets_per_mode(self, interstate_series):
        opts = LearningOptions(n_tau=2, fit_days=4)
        quarantined = learn_gain_set(interstate_series, 10, "quarantined", opts)
        assert quarantined.g_full is quarantined.g_diag

        interstate = learn_gain_set(interstate_series, 10, "interstate", opts)
        assert_array_equal(interstate.g_diag.values, interstate.g_full.restricted_to_diagonal().values)

        diagnostics = LearningDiagnostics()
        blended = learn_gain_set(interstate_series, 10, LearningMode.BLENDED, opts, diagnostics)
        assert blended.g_diag.mode == "quarantined"
        assert blended.g_full.mode == "interstate"
        assert diagnostics.problems == 12

    def test_options_fingerprint_defaults_fit_days(self):
        assert LearningOptions(n_tau=5).to_dict()["fit_days"] == 5
