"""Exponent fits, arm constants, beta scans, and the critical-point bisection."""

from fractions import Fraction as F

import mpmath
import pytest
from mpmath import mpf, workprec

from betheising import (
    ConfigError,
    DomainError,
    ModelParams,
    VerificationFailure,
    arm_constants,
    estimate_betac,
    fit_exponent,
    fixed_point_slope,
    geometric_heights,
    scan_beta,
    theorem1_enclosure,
)
from betheising.analysis import critical_series
from betheising.numerics import fraction_to_mpf, mpf_to_fraction
from betheising.recursion import MagnetizationSeries, SeriesRow


def synthetic_series(exponent: float, prefactor: float = 1.0, n_max: int = 16384):
    """Rows m_n = prefactor * n**(-exponent) on a doubling grid."""
    params = ModelParams.critical(2)
    rows = []
    with workprec(128):
        n = 16
        while n <= n_max:
            m = mpf(prefactor) * mpf(n) ** (-mpf(exponent))
            rows.append(SeriesRow(n, 1 - m, m))
            n *= 2
    return MagnetizationSeries(params=params, mode="float", precision_bits=128, rows=rows)


class TestGeometricHeights:
    def test_basic(self):
        heights = geometric_heights(10, 100, 1.2)
        assert heights[0] == 10
        assert heights == sorted(set(heights))
        assert all(h <= 100 for h in heights)
        assert len(heights) >= 10

    def test_progress_guaranteed(self):
        # rounding can stall a slow ratio; successive heights must still grow
        heights = geometric_heights(1, 30, 1.05)
        assert all(b > a for a, b in zip(heights, heights[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            geometric_heights(0, 10)
        with pytest.raises(DomainError):
            geometric_heights(10, 5)
        with pytest.raises(DomainError):
            geometric_heights(1, 10, 0.9)


class TestFitExponent:
    def test_exact_half_power_law(self):
        fit = fit_exponent(synthetic_series(0.5), (16, 16384))
        assert abs(fit.rho_hat - 0.5) <= 1e-12
        assert fit.stderr <= 1e-12
        assert fit.residual_max <= 1e-12

    def test_prefactor_independent_slope(self):
        fit = fit_exponent(synthetic_series(1.0, prefactor=3.0), (16, 16384))
        assert abs(fit.rho_hat - 1.0) <= 1e-12

    def test_window_errors(self):
        series = synthetic_series(0.5)
        with pytest.raises(DomainError):
            fit_exponent(series, (10**7, 10**8))  # outside
        with pytest.raises(DomainError):
            fit_exponent(series, (16, 64))  # too few points
        with pytest.raises(DomainError):
            fit_exponent(series, (4096, 16))  # inverted

    def test_real_run_small_window(self):
        series = critical_series(2, (100, 20000), 128)
        fit = fit_exponent(series, (100, 20000))
        assert abs(fit.rho_hat - 0.5) <= 0.05


class TestArmConstants:
    def test_synthetic_constants_are_one(self):
        arms = arm_constants(synthetic_series(0.5), (16, 16384))
        with workprec(128):
            assert abs(arms.c_hat - 1) <= mpf("1e-30")
            assert abs(arms.C_hat - 1) <= mpf("1e-30")

    def test_window_must_clear_k2_squared(self):
        series = synthetic_series(0.5)
        with pytest.raises(DomainError):
            arm_constants(series, (8, 4096))

    def test_monotone_in_window(self):
        series = critical_series(2, (100, 50000), 128)
        small = arm_constants(series, (200, 5000))
        large = arm_constants(series, (100, 50000))
        assert large.c_hat <= small.c_hat
        assert large.C_hat >= small.C_hat

    def test_real_run_within_proof_bounds(self):
        series = critical_series(2, (100, 50000), 128)
        arms = arm_constants(series, (100, 50000))
        with workprec(128):
            assert arms.c_hat > fraction_to_mpf(F(20, 49), 128)
            assert arms.C_hat < mpmath.sqrt(8)


class TestEnclosure:
    def test_d2_small_run(self):
        report, series = theorem1_enclosure(2, 5000, 128, collect_heights=[1000, 2000])
        assert report.passed
        assert report.n_start == 9
        assert report.n_checked == 5000 - 8
        assert series.heights() == [1000, 2000]

    def test_d3_start_point(self):
        report, _ = theorem1_enclosure(3, 100, 128)
        assert report.n_start == 7  # 6 d^2/(d^2-1) = 6.75


class TestScanBeta:
    def test_rows_ordered_and_bounded(self):
        rows = scan_beta(2, [F(6, 10), F(4, 10), F(5, 10)], 200, 128)
        betas = [b for b, _ in rows]
        assert betas == sorted(betas)
        assert all(0 < m < 1 for _, m in rows)

    def test_subcritical_decay(self):
        (_, m), = scan_beta(2, [F(1, 10)], 1000, 128)
        assert m < mpf("1e-6")

    def test_supercritical_plateau(self):
        (_, m1), = scan_beta(2, [F(1)], 1000, 128)
        (_, m2), = scan_beta(2, [F(1)], 2000, 128)
        assert m1 > mpf("0.5")
        assert abs(m1 - m2) < mpf("1e-9")

    def test_cross_path_float_beta_vs_exact_t(self):
        # beta given as the 128-bit rounding of the critical point must
        # reproduce the exact-t critical run at matching precision
        from betheising import critical_beta, iterate_ratio

        beta_c, _ = critical_beta(2, 128)
        rows = scan_beta(2, [mpf_to_fraction(beta_c)], 10000, 128)
        last = None
        for state in iterate_ratio(ModelParams.critical(2), 10000, "float", 128):
            last = state
        with workprec(128):
            m_exact_path = (1 - last.value) / (1 + last.value)
            rel = abs(rows[0][1] - m_exact_path) / m_exact_path
            assert rel <= mpf("1e-20")

    def test_invalid_grid(self):
        with pytest.raises(DomainError):
            scan_beta(2, [], 100)
        with pytest.raises(DomainError):
            scan_beta(2, [F(-1, 2)], 100)


class TestFixedPointSlope:
    def test_exact_unity_at_criticality(self):
        assert fixed_point_slope(ModelParams.critical(2)) == F(1)
        assert fixed_point_slope(ModelParams.critical(3)) == F(1)

    def test_matches_finite_difference(self):
        # central difference of the map near z = 1 at b = 3, d = 2
        with workprec(192):
            b, d = mpf(3), 2
            z0 = 1 - mpf("1e-6")
            h = mpf("1e-9")
            g = lambda z: ((b * z + 1) / (b + z)) ** d
            fd = (g(z0 + h) - g(z0 - h)) / (2 * h)
            slope = fixed_point_slope(ModelParams.critical(2))
            assert abs(fd - fraction_to_mpf(F(slope), 192)) / fd <= mpf("1e-4")

    def test_subcritical_below_one(self):
        # slope < 1 iff beta < beta_c on an exact t grid
        crit = F(3)
        for t in (F(3, 2), F(2), F(5, 2)):
            assert fixed_point_slope(ModelParams.from_t(2, t)) < 1
        for t in (F(7, 2), F(4)):
            assert fixed_point_slope(ModelParams.from_t(2, t)) > 1
        assert fixed_point_slope(ModelParams.from_t(2, crit)) == 1


class TestEstimateBetac:
    def test_d2_reduced_classifier(self):
        result = estimate_betac(2, 1e-4, 128, max_height=20000)
        with workprec(128):
            assert result.deviation <= mpf("1e-3")
        subs = [b for b, s in result.classifications if not s]
        sups = [b for b, s in result.classifications if s]
        assert max(subs) < min(sups)

    def test_tolerance_guard(self):
        with pytest.raises(ConfigError):
            estimate_betac(2, 1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            estimate_betac(1, 1e-4)
