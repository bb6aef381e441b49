"""Ratio recursion: hand-checked exact values, map identities, guards."""

import random
from fractions import Fraction as F

import mpmath
import pytest
from mpmath import mp, mpf, workprec

from betheising import (
    ConfigError,
    DomainError,
    ModeError,
    ModelParams,
    PrecisionFailure,
    RatioState,
    SizeGuardError,
    collect_series,
    critical_b,
    critical_beta,
    g_step,
    initial_ratio,
    iterate_ratio,
    magnetization_regular,
    magnetization_rooted,
    xy_direct,
)
from betheising.numerics import fraction_to_mpf, mpf_to_fraction
from betheising.recursion import iterate_gap


# ---------------------------------------------------------------------------
# parameters and the critical point
# ---------------------------------------------------------------------------

class TestCriticalPoint:
    def test_b_critical_exact(self):
        assert critical_b(2) == F(3)
        assert critical_b(3) == F(2)
        assert critical_b(5) == F(3, 2)

    @pytest.mark.parametrize("d,log_arg", [(2, 3), (3, 2)])
    def test_beta_critical_against_log_oracle(self, d, log_arg):
        # atanh(1/d) = log(sqrt((d+1)/(d-1))); for d=2,3 that is log(3)/2, log(2)/2
        beta, b = critical_beta(d, 256)
        with workprec(300):
            oracle = mpmath.log(log_arg) / 2
            assert abs(beta - oracle) <= mpf(2) ** (-250)
        assert b == F(d + 1, d - 1)

    def test_beta_critical_reference_digits(self):
        beta2, _ = critical_beta(2, 128)
        beta3, _ = critical_beta(3, 128)
        assert mpmath.nstr(beta2, 10) == "0.5493061443"
        assert mpmath.nstr(beta3, 10) == "0.3465735903"

    def test_monotone_decreasing_in_d(self):
        betas = [critical_beta(d, 128)[0] for d in range(2, 11)]
        assert all(a > b for a, b in zip(betas, betas[1:]))

    def test_rejects_small_d(self):
        with pytest.raises(DomainError):
            critical_beta(1)
        with pytest.raises(DomainError):
            ModelParams.critical(1)

    def test_rejects_degenerate_temperature(self):
        # t = 1 is beta = 0; the model requires b > 1
        with pytest.raises(DomainError):
            ModelParams.from_t(2, 1)
        with pytest.raises(DomainError):
            ModelParams.from_beta(2, 0)
        with pytest.raises(DomainError):
            ModelParams.from_t(2, F(1, 2))

    def test_is_critical_flag(self):
        assert ModelParams.critical(2).is_critical
        assert not ModelParams.from_t(2, F(7, 2)).is_critical
        assert not ModelParams.from_beta(2, F(1, 2)).is_exact


# ---------------------------------------------------------------------------
# initial ratio
# ---------------------------------------------------------------------------

class TestInitialRatio:
    def test_hand_value_d2_critical(self):
        # ((9 + 3)/(27 + 1))^2 = (3/7)^2
        r0 = initial_ratio(ModelParams.critical(2))
        assert r0.value == F(9, 49)
        assert r0.index == 0

    def test_hand_value_d3_critical(self):
        r0 = initial_ratio(ModelParams.critical(3))
        assert r0.value == F(1000, 4913)

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    @pytest.mark.parametrize("t", [F(101, 100), F(3, 2), F(9)])
    def test_open_unit_interval(self, d, t):
        value = initial_ratio(ModelParams.from_t(d, t)).value
        assert 0 < value < 1

    def test_symmetric_limit(self):
        # t -> 1+ is the beta -> 0 limit where the two sums coincide; t = 1
        # itself is rejected, so approach it
        gaps = []
        for eps in (F(1, 10**3), F(1, 10**6), F(1, 10**9)):
            r0 = initial_ratio(ModelParams.from_t(2, 1 + eps)).value
            gaps.append(1 - r0)
        assert gaps[0] > gaps[1] > gaps[2] > 0
        assert gaps[2] < F(1, 10**7)

    def test_float_matches_exact(self):
        params = ModelParams.critical(2)
        exact = initial_ratio(params, "exact").value
        approx = initial_ratio(params, "float", 128).value
        with workprec(160):
            assert abs(approx - fraction_to_mpf(exact, 160)) <= mpf(2) ** (-126)

    def test_exact_mode_needs_rational_t(self):
        with pytest.raises(ModeError):
            initial_ratio(ModelParams.from_beta(2, F(1, 2)), "exact")


# ---------------------------------------------------------------------------
# the map g
# ---------------------------------------------------------------------------

class TestMapStep:
    def test_fixed_point_exact(self):
        params = ModelParams.critical(2)
        one = RatioState(index=0, value=F(1))
        assert g_step(one, params).value == F(1)

    @pytest.mark.parametrize("d,t", [(2, F(3)), (3, F(2)), (4, F(9, 4))])
    def test_fixed_point_any_b(self, d, t):
        params = ModelParams.from_t(d, t)
        assert g_step(RatioState(0, F(1)), params).value == F(1)

    def test_hand_value_second_step(self):
        params = ModelParams.critical(2)
        r1 = g_step(RatioState(0, F(9, 49)), params)
        assert r1.value == F(361, 1521)
        assert r1.index == 1

    def test_monotone_probe(self):
        params = ModelParams.critical(2)
        ga = g_step(RatioState(0, F(1, 5)), params).value
        gb = g_step(RatioState(0, F(3, 10)), params).value
        assert ga < gb

    def test_monotone_grid_all_d(self):
        for d in range(2, 11):
            params = ModelParams.critical(d)
            values = [g_step(RatioState(0, F(i, 40)), params).value for i in range(1, 41)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_map_identity_exact(self):
        # (r + (1 - r^2)/(b + r))^d == ((b r + 1)/(b + r))^d as exact rationals
        rng = random.Random(987)
        for _ in range(1000):
            d = rng.randint(2, 6)
            r = F(rng.randint(1, 999), 1000)
            b = F(rng.randint(1001, 10000), 1000)
            params = ModelParams.from_t(d, b)
            direct = (r + (1 - r * r) / (b + r)) ** d
            assert g_step(RatioState(0, r), params).value == direct

    def test_map_identity_float(self):
        # measured worst case is (2d - 1) ulp: the final d-th power amplifies
        # the inner rounding, so 4 ulp at d = 2 and 2d + 2 ulp above
        rng = random.Random(988)
        with workprec(128):
            for _ in range(1000):
                for d in range(2, 7):
                    r = mpf(rng.uniform(1e-3, 0.999))
                    b = mpf(rng.uniform(1.001, 10.0))
                    direct = (r + (1 - r * r) / (b + r)) ** d
                    closed = ((b * r + 1) / (b + r)) ** d
                    ulp = mpf(2) ** (mpmath.mag(closed) - 128)
                    budget = 4 if d == 2 else 2 * d + 2
                    assert abs(direct - closed) <= budget * ulp

    def test_domain_errors(self):
        params = ModelParams.critical(2)
        with pytest.raises(DomainError):
            RatioState(0, F(0))
        with pytest.raises(DomainError):
            RatioState(0, F(3, 2))


# ---------------------------------------------------------------------------
# iteration
# ---------------------------------------------------------------------------

class TestIterate:
    def test_first_two_exact(self):
        states = list(iterate_ratio(ModelParams.critical(2), 2, "exact"))
        assert [s.value for s in states] == [F(9, 49), F(361, 1521)]
        assert [s.index for s in states] == [0, 1]

    def test_empty_stream(self):
        assert list(iterate_ratio(ModelParams.critical(2), 0)) == []

    def test_exact_guard(self):
        with pytest.raises(SizeGuardError):
            list(iterate_ratio(ModelParams.critical(2), 30, "exact"))
        with pytest.raises(SizeGuardError):
            xy_direct(ModelParams.critical(3), 11)
        with pytest.raises(SizeGuardError):
            xy_direct(ModelParams.critical(5), 7)

    def test_precision_config_error(self):
        with pytest.raises(ConfigError):
            list(iterate_ratio(ModelParams.critical(2), 3, "float", 32))
        with pytest.raises(ConfigError):
            list(iterate_ratio(ModelParams.critical(2), 3, "float", 8192))

    def test_critical_orbit_increases(self):
        values = [s.value for s in iterate_ratio(ModelParams.critical(2), 200, "float", 128)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_float_tracks_exact_at_n12(self):
        params = ModelParams.critical(2)
        exact = None
        for state in iterate_ratio(params, 13, "exact"):
            exact = state.value
        approx = None
        for state in iterate_ratio(params, 13, "float", 128):
            approx = state.value
        with workprec(200):
            rel = abs(approx - fraction_to_mpf(exact, 200)) / fraction_to_mpf(exact, 200)
            assert rel <= mpf(2) ** (-100)

    def test_saturation_raises_with_guidance(self):
        # deep subcritical at low precision saturates the ratio at 1
        params = ModelParams.from_beta(2, F(1, 5))
        with pytest.raises(PrecisionFailure, match="iterate_gap"):
            list(iterate_ratio(params, 200, "float", 64))

    def test_gap_iterator_survives_saturation(self):
        params = ModelParams.from_beta(2, F(1, 5))
        gaps = list(iterate_gap(params, 200, 64))
        assert len(gaps) == 200
        assert all(0 < g < 1 for g in gaps)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


# ---------------------------------------------------------------------------
# magnetization transforms
# ---------------------------------------------------------------------------

class TestMagnetization:
    def test_fixed_point_gives_zero(self):
        assert magnetization_rooted(RatioState(0, F(1))) == 0

    def test_hand_values_from_enumeration(self):
        # 20/29 and 580/941 are confirmed independently in test_oracle
        assert magnetization_rooted(RatioState(0, F(9, 49))) == F(20, 29)
        assert magnetization_rooted(RatioState(1, F(361, 1521))) == F(580, 941)

    def test_regular_tree_exact_power(self):
        # (9/49)^(3/2) = 27/343, so the value is 158/185
        with workprec(128):
            r = RatioState(0, fraction_to_mpf(F(9, 49), 128), 128)
            value = magnetization_regular(r, 2)
            target = fraction_to_mpf(F(158, 185), 128)
            assert abs(value - target) <= mpf(2) ** (-120)

    def test_regular_tree_limits(self):
        with workprec(128):
            assert magnetization_regular(RatioState(0, mpf(1), 128), 2) == 0
            near_one = magnetization_regular(RatioState(0, mpf("1e-30"), 128), 2)
            assert 1 - near_one < mpf("1e-29")

    def test_regular_tree_rejects_exact(self):
        with pytest.raises(ModeError):
            magnetization_regular(RatioState(0, F(9, 49)), 2)

    def test_domain(self):
        with pytest.raises(DomainError):
            magnetization_rooted(F(2))


# ---------------------------------------------------------------------------
# direct small-height recursion
# ---------------------------------------------------------------------------

class TestXYDirect:
    def test_base_pair_d2(self):
        pair = xy_direct(ModelParams.critical(2), 0)
        assert pair.x.as_fraction() == F(784, 27)
        assert pair.y.as_fraction() == F(16, 3)
        assert pair.ratio == F(9, 49)

    def test_base_pair_d3(self):
        pair = xy_direct(ModelParams.critical(3), 0)
        assert pair.x.as_fraction() == F(4913, 64)
        assert pair.y.as_fraction() == F(125, 8)

    def test_odd_d_carries_sqrt(self):
        pair = xy_direct(ModelParams.critical(3), 1)
        assert not pair.x.is_rational
        with pytest.raises(ModeError):
            pair.x.as_fraction()

    @pytest.mark.parametrize("d", [2, 3])
    def test_cross_path_equality(self, d):
        params = ModelParams.critical(d)
        ratios = [s.value for s in iterate_ratio(params, 9, "exact")]
        for n in range(9):
            assert xy_direct(params, n).ratio == ratios[n]

    def test_ordering_invariant(self):
        # x > y > 0 for every computed index
        params = ModelParams.critical(2)
        for n in range(5):
            pair = xy_direct(params, n)
            assert pair.y.coeff > 0
            assert pair.x.coeff > pair.y.coeff

    def test_requires_exact_params(self):
        with pytest.raises(ModeError):
            xy_direct(ModelParams.from_beta(2, F(1, 2)), 1)


# ---------------------------------------------------------------------------
# series assembly
# ---------------------------------------------------------------------------

class TestCollectSeries:
    def test_exact_rows(self):
        series = collect_series(ModelParams.critical(2), [1, 2], "exact")
        assert [(row.n, row.ratio, row.magnetization) for row in series.rows] == [
            (1, F(9, 49), F(20, 29)),
            (2, F(361, 1521), F(580, 941)),
        ]

    def test_rows_strictly_increasing_in_n(self):
        series = collect_series(ModelParams.critical(2), [5, 1, 3, 3], "exact")
        assert series.heights() == [1, 3, 5]

    def test_subcritical_float_survives_saturation(self):
        series = collect_series(ModelParams.from_beta(2, F(1, 5)), range(1, 101), "float", 128)
        ms = [row.magnetization for row in series.rows]
        assert len(ms) == 100
        assert all(0 < m < 1 for m in ms)
        assert all(a > b for a, b in zip(ms, ms[1:]))
