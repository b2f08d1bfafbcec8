import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from pandemic_growth.core.errors import DimensionMismatch, NonConvergence, OutOfRange
from pandemic_growth.dynamics import GainTensor
from pandemic_growth.dynamics.simulation import simulate_series
from pandemic_growth.learning import LearningMode, LearningOptions, learn_gains
from pandemic_growth.stability import (
    analyse_day, characteristic_polynomial, companion_matrix, eigen_magnitudes, gamma_from_gains,
    polynomial_roots, simulate_active_cases, stability_timeline, write_stability_reports,
)
from pandemic_growth.storage import ReportStorageManager
from pandemic_growth.timeseries import RegionRegistry


def lag_one_gains(day, omega=0.0, theta=0.0):
    """R=1, n_tau=1 gains whose spectral radius is |1 + omega - theta|"""
    return GainTensor(np.array([[[[omega, 0.0, theta]]]]), day=day)


class TestGamma:
    def test_gamma_is_net_self_gain(self, planted_gains):
        assert_allclose(gamma_from_gains(planted_gains, 1).gamma, [-1.0, 0.0, 0.0, 1.0], atol=1e-12)
        assert_allclose(gamma_from_gains(planted_gains, 3).gamma, [-1.0, 0.0, 0.0, 1.0], atol=1e-12)

    def test_recursion_repeats_the_period(self):
        actives = simulate_active_cases(np.array([-1.0, 0.0, 0.0, 1.0]), [100.0, 250.0, 170.0, 320.0], 8)
        assert_allclose(actives[4:8], actives[0:4])
        assert_allclose(actives[8:12], actives[0:4])

    def test_seed_length_must_match(self):
        with pytest.raises(DimensionMismatch):
            simulate_active_cases(np.zeros(3), np.zeros(2), 1)


class TestRoots:
    def test_companion_layout(self):
        matrix = companion_matrix(np.array([0.1, 0.2, 0.3]))
        assert_array_equal(matrix, [[0, 1, 0], [0, 0, 1], [0.3, 0.2, 1.1]])

    def test_characteristic_polynomial(self):
        assert_allclose(characteristic_polynomial(np.array([0.1, 0.2, 0.3])), [1.0, -1.1, -0.2, -0.3])

    def test_three_planted_roots(self):
        result = eigen_magnitudes(companion_matrix(np.array([-0.1, 0.25, -0.225])))
        assert result.converged
        assert_allclose(result.magnitudes, [0.9, 0.5, 0.5], atol=1e-8)
        assert_allclose(sorted(result.roots.real), [-0.5, 0.5, 0.9], atol=1e-8)

    def test_golden_pair(self):
        result = polynomial_roots(characteristic_polynomial(np.array([0.0, 0.25])))
        assert_allclose(result.magnitudes, [(1 + np.sqrt(2)) / 2, (np.sqrt(2) - 1) / 2], atol=1e-10)

    def test_zero_roots_split_off(self):
        result = polynomial_roots(np.array([1.0, -0.5, 0.0, 0.0]))
        assert_allclose(result.magnitudes, [0.5, 0.0, 0.0], atol=1e-12)
        assert result.converged

    def test_unit_circle_roots(self):
        result = polynomial_roots(np.array([1.0, 0.0, 0.0, 0.0, -1.0]))
        assert_allclose(result.magnitudes, np.ones(4), atol=1e-8)

    def test_random_planted_roots(self):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 200:
            degree = int(rng.integers(1, 15))
            n_pairs = int(rng.integers(0, degree // 2 + 1))
            pairs = rng.uniform(0.05, 1.5, n_pairs) * np.exp(1j * rng.uniform(0.2, np.pi - 0.2, n_pairs))
            reals = rng.choice([-1.0, 1.0], degree - 2 * n_pairs) * rng.uniform(0.05, 1.5, degree - 2 * n_pairs)
            planted = np.concatenate([pairs, pairs.conj(), reals])
            gaps = np.abs(planted[:, None] - planted[None, :]) + np.eye(degree)
            if gaps.min() < 0.1:
                continue
            coefficients = np.real(np.poly(planted))
            result = polynomial_roots(coefficients)
            assert result.converged
            assert_allclose(result.magnitudes, np.sort(np.abs(planted))[::-1], atol=1e-8)
            checked += 1

    def test_roots_are_companion_eigenpairs(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            gamma = rng.uniform(-0.5, 0.5, int(rng.integers(1, 15)))
            matrix = companion_matrix(gamma)
            result = eigen_magnitudes(matrix)
            n = gamma.shape[0]
            # trace of the companion matrix
            assert result.roots.sum().real == pytest.approx(1.0 + gamma[0], abs=1e-8)
            assert abs(result.roots.sum().imag) <= 1e-8
            for z in result.roots:
                v = z ** np.arange(n)
                assert np.linalg.norm(matrix @ v - z * v) <= 1e-8 * max(1.0, abs(z) ** n) * np.sqrt(n)
            assert np.all(result.residuals <= 1e-6 * np.maximum(1.0, result.magnitudes ** n))

    def test_strict_raises_when_out_of_iterations(self):
        with pytest.raises(NonConvergence):
            polynomial_roots(np.array([1.0, 0.3, -2.0, 0.7, 1.1]), max_iter=1, strict=True)

    def test_constant_polynomial_rejected(self):
        with pytest.raises(DimensionMismatch):
            polynomial_roots(np.array([1.0]))


class TestTimeline:
    def days(self):
        settings = [(0.1, 0.0), (0.05, 0.0), (0.0, 0.1), (0.0, 0.05), (0.0, 0.2)]
        return [lag_one_gains(10 + offset, omega, theta) for offset, (omega, theta) in enumerate(settings)]

    def test_single_day(self):
        verdict = analyse_day(lag_one_gains(3, theta=0.1))
        assert verdict.spectral_radius == pytest.approx(0.9)
        assert verdict.stable
        assert verdict.gap == pytest.approx(0.1)

    def test_radius_on_the_unit_circle_is_unstable(self, planted_gains):
        verdict = analyse_day(planted_gains.with_day(20), 2, tol_margin=1e-9)
        assert verdict.spectral_radius == pytest.approx(1.0)
        assert not verdict.stable

    def test_first_stable_day_and_crossings(self, calendar):
        report = stability_timeline(reversed(self.days()), "VT", calendar=calendar)
        assert [entry.k for entry in report.days] == [10, 11, 12, 13, 14]
        assert report.first_stable_day == 12
        crossings = report.crossings()
        assert len(crossings) == 1
        assert crossings[0]["k"] == 12
        assert crossings[0]["direction"] == "inward"
        assert crossings[0]["date"] == calendar.to_date(12).isoformat()

    def test_margin_tightens_the_verdict(self):
        report = stability_timeline(self.days(), "VT", tol_margin=0.06)
        assert report.first_stable_day == 14

    def test_never_stable(self):
        report = stability_timeline(self.days()[:2], "VT")
        assert report.first_stable_day is None

    def test_days_must_be_contiguous(self):
        days = self.days()
        with pytest.raises(OutOfRange):
            stability_timeline([days[0], days[2]], "VT")

    def test_reports(self, tmp_path):
        storage = ReportStorageManager(tmp_path)
        summary = write_stability_reports(storage, stability_timeline(self.days(), "VT"))
        assert summary["k_s"] == 12
        assert summary["unstable_days"] == 2
        frame = (tmp_path / "stability.csv").read_text().splitlines()
        assert frame[0] == "k,date,scope,rank,magnitude,spectral_radius,stable"
        assert len(frame) == 6
        assert json.loads((tmp_path / "stability_summary.json").read_text())["k_s"] == 12

    def test_missing_day_is_reported_before_sorting(self):
        with pytest.raises(OutOfRange):
            stability_timeline([lag_one_gains(10), lag_one_gains(None), lag_one_gains(11)], "VT")


class TestDecayingEpidemic:
    """Actives follow a[k+1] = 0.2 a[k] + 0.15 a[k-1], roots 0.5 and -0.3"""

    @pytest.fixture
    def decaying_series(self, calendar):
        values = np.zeros((1, 1, 2, 3))
        values[0, 0, 0] = (0.2, 0.5, 0.5)
        values[0, 0, 1] = (0.25, 0.05, 0.05)
        seed = np.array([[[1011.0, 1.0, 10.0], [1202.0, 2.0, 900.0]]])
        registry = RegionRegistry([("VT", "Vermont")])
        return simulate_series(seed, GainTensor(values), 1.0, 12, registry, calendar)

    def test_learned_gains_are_stable_from_the_first_day(self, decaying_series, calendar):
        opts = LearningOptions(n_tau=2, fit_days=2)
        gains = [learn_gains(decaying_series, k, LearningMode.QUARANTINED, opts) for k in range(4, 13)]
        report = stability_timeline(gains, "VT", calendar=calendar)
        assert all(entry.stable for entry in report.days)
        assert report.first_stable_day == 4
        assert_allclose([entry.spectral_radius for entry in report.days], 0.5, atol=1e-6)
