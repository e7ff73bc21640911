"""Tests for first-crossing and first-hitting quantities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from poissonsub import (
    Boundary,
    IteratedLaw,
    ModelParams,
    avoiding_table,
    crossing_density_constant,
    hitting_cdf,
    hitting_density,
    hitting_probability,
    mean_crossing_time_constant,
    survival_linear_increasing,
    survival_nonincreasing,
)
from poissonsub.crossing import _strict_floor, crossing_density_constant_stirling

LAW = IteratedLaw(ModelParams(2.0, 1.0))


class TestBoundary:
    def test_validation(self):
        with pytest.raises(ValueError):
            Boundary.constant(0)
        with pytest.raises(ValueError):
            Boundary("quadratic", 2)
        with pytest.raises(ValueError):
            Boundary("general_nonincreasing", 2)

    def test_values(self):
        assert Boundary.constant(3).value(7.0) == 3.0
        assert Boundary.linear_decreasing(3).value(1.5) == 1.5
        assert Boundary.linear_increasing(3).value(1.5) == 4.5
        b = Boundary.nonincreasing(4, lambda t: 4.0 / (1 + t))
        assert b.value(1.0) == 2.0
        assert b.is_nonincreasing

    def test_strict_floor(self):
        assert _strict_floor(3.0) == 2
        assert _strict_floor(2.7) == 2
        assert _strict_floor(0.4) == 0
        assert _strict_floor(0.0) == -1


class TestSurvivalNonincreasing:
    def test_wrong_operation(self):
        with pytest.raises(ValueError):
            survival_nonincreasing(Boundary.linear_increasing(2), 1.0, LAW)

    def test_constant_equals_cdf(self):
        # integer boundary k: survival is the law's CDF at k - 1
        for k in (1, 2, 5):
            for t in (0.2, 1.0, 3.0):
                assert survival_nonincreasing(Boundary.constant(k), t, LAW) == \
                    LAW.cdf(k - 1, t)

    def test_zero_after_boundary_hits_floor(self):
        b = Boundary.linear_decreasing(2)
        assert survival_nonincreasing(b, 2.0, LAW) == 0.0
        assert survival_nonincreasing(b, 5.0, LAW) == 0.0
        assert survival_nonincreasing(b, 1.99, LAW) > 0.0

    def test_fractional_level_uses_strict_floor(self):
        # at level 1.5 the process survives only while it stays <= 1
        b = Boundary.nonincreasing(2, lambda t: 1.5)
        assert survival_nonincreasing(b, 1.0, LAW) == LAW.cdf(1, 1.0)

    @given(t=st.floats(0.0, 5.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_time(self, t):
        b = Boundary.constant(3)
        s1 = survival_nonincreasing(b, t, LAW)
        s2 = survival_nonincreasing(b, t + 0.25, LAW)
        assert s2 <= s1 + 1e-12

    def test_initial_value(self):
        assert survival_nonincreasing(Boundary.constant(4), 0.0, LAW) == 1.0


class TestCrossingDensityConstant:
    def test_level_one_is_exponential(self):
        # the k = 1 crossing time is exponential with the thinned rate
        a = LAW.rate
        for t in (0.1, 1.0, 2.5):
            assert crossing_density_constant(1, t, LAW) == pytest.approx(
                a * math.exp(-a * t), rel=1e-12)

    def test_stirling_form_agrees(self):
        for k in (1, 2, 3, 5):
            for t in (0.2, 1.0, 4.0):
                assert crossing_density_constant(k, t, LAW) == pytest.approx(
                    crossing_density_constant_stirling(k, t, LAW), rel=1e-10)

    def test_finite_difference_oracle(self):
        h = 1e-5
        for k in (2, 4):
            for t in (0.5, 1.5):
                fd = -(LAW.cdf(k - 1, t + h) - LAW.cdf(k - 1, t - h)) / (2 * h)
                assert abs(crossing_density_constant(k, t, LAW) - fd) < 1e-6

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
    def test_integrates_to_one(self, k):
        q, _ = integrate.quad(lambda t: crossing_density_constant(k, t, LAW),
                              0, np.inf, limit=400)
        assert abs(q - 1.0) < 1e-6

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            crossing_density_constant(0, 1.0, LAW)
        with pytest.raises(ValueError):
            crossing_density_constant(2, 0.0, LAW)


class TestMeanCrossingTime:
    def test_level_one(self):
        assert mean_crossing_time_constant(1, LAW) == pytest.approx(
            1.0 / LAW.rate, rel=1e-14)

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_quadrature_oracle(self, k):
        # E(T) is the integral of the survival function
        q, _ = integrate.quad(
            lambda t: survival_nonincreasing(Boundary.constant(k), t, LAW),
            0, np.inf, limit=400)
        assert mean_crossing_time_constant(k, LAW) == pytest.approx(q, rel=1e-8)

    def test_density_moment_oracle(self):
        k = 3
        q, _ = integrate.quad(
            lambda t: t * crossing_density_constant(k, t, LAW),
            0, np.inf, limit=400)
        assert mean_crossing_time_constant(k, LAW) == pytest.approx(q, rel=1e-7)

    def test_increasing_in_level(self):
        means = [mean_crossing_time_constant(k, LAW) for k in range(1, 8)]
        assert all(a < b for a, b in zip(means, means[1:]))


class TestHitting:
    def test_probability_range_and_renewal_limit(self):
        # for large k the chance of landing exactly on a state settles at
        # the ratio of the jump rate to the mean state growth per unit time
        for mu in (0.5, 1.0, 2.0):
            probs = [hitting_probability(k, mu) for k in range(1, 16)]
            assert all(0 < p <= 1 for p in probs)
            assert probs[-1] == pytest.approx(-math.expm1(-mu) / mu, rel=1e-4)

    def test_probability_small_mu_limit(self):
        # rare-batch limit: every state is stepped through one at a time
        for k in (1, 2, 3):
            assert hitting_probability(k, 1e-8) == pytest.approx(1.0, abs=1e-6)

    def test_probability_level_one_closed_form(self):
        for mu in (0.5, 1.0, 3.0):
            assert hitting_probability(1, mu) == pytest.approx(
                mu / math.expm1(mu), rel=1e-13)

    def test_cdf_limits(self):
        for k in (1, 2, 4):
            assert hitting_cdf(k, 0.0, LAW) == 0.0
            assert hitting_cdf(k, 1e4, LAW) == pytest.approx(
                hitting_probability(k, LAW.params.mu), abs=1e-10)

    def test_cdf_lambda_invariant_limit(self):
        # the total hitting probability does not depend on lam
        other = IteratedLaw(ModelParams(0.5, 1.0))
        assert hitting_cdf(3, 1e5, LAW) == pytest.approx(
            hitting_cdf(3, 1e5, other), abs=1e-10)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_density_integrates_to_hitting_probability(self, k):
        for mu in (0.5, 1.0, 2.0):
            law = IteratedLaw(ModelParams(1.0, mu))
            q, _ = integrate.quad(lambda t: hitting_density(k, t, law),
                                  0, np.inf, limit=400)
            assert q == pytest.approx(hitting_probability(k, mu), abs=1e-8)

    def test_density_is_cdf_derivative(self):
        h = 1e-5
        for k in (1, 3):
            for t in (0.4, 1.2, 3.0):
                fd = (hitting_cdf(k, t + h, LAW) - hitting_cdf(k, t - h, LAW)) / (2 * h)
                assert abs(hitting_density(k, t, LAW) - fd) < 1e-6

    def test_level_one_density_closed_form(self):
        lam, mu = LAW.params.lam, LAW.params.mu
        t = 0.9
        expect = mu * math.exp(-mu) * lam * math.exp(-LAW.rate * t)
        assert hitting_density(1, t, LAW) == pytest.approx(expect, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            hitting_probability(0, 1.0)
        with pytest.raises(ValueError):
            hitting_probability(2, 0.0)
        with pytest.raises(ValueError):
            hitting_density(2, -1.0, LAW)


class TestAvoidingTable:
    def test_row_zero(self):
        tab = avoiding_table(2, 0, LAW)
        assert tab.survival_at_integer(0) == 1.0

    def test_row_one_matches_cdf(self):
        # no crossing by t = 1 just means Z(1) <= k (strictly below k + 1)
        for k in (1, 2, 4):
            tab = avoiding_table(k, 1, LAW)
            assert tab.survival_at_integer(1) == pytest.approx(
                LAW.cdf(k, 1.0), abs=1e-12)

    def test_survival_decreasing_in_n(self):
        tab = avoiding_table(2, 8, LAW)
        s = [tab.survival_at_integer(n) for n in range(9)]
        assert all(a >= b > 0 for a, b in zip(s, s[1:]))

    def test_rows_dominated_by_unconstrained_pmf(self):
        tab = avoiding_table(2, 5, LAW)
        for n in (1, 3, 5):
            free = np.array([LAW.pmf(j, float(n)) for j in range(len(tab.rows[n]))])
            assert np.all(tab.rows[n] <= free + 1e-13)

    def test_out_of_range(self):
        tab = avoiding_table(2, 3, LAW)
        with pytest.raises(ValueError):
            tab.survival_at_integer(4)


class TestSurvivalLinearIncreasing:
    def test_matches_table_at_integers(self):
        tab = avoiding_table(3, 6, LAW)
        for n in range(7):
            assert survival_linear_increasing(3, float(n), LAW, tab) == \
                tab.survival_at_integer(n)

    def test_continuity_at_integers(self):
        for k in (1, 3):
            for n in (1, 2, 4):
                left = survival_linear_increasing(k, n - 1e-10, LAW)
                at = survival_linear_increasing(k, float(n), LAW)
                assert abs(left - at) < 1e-8

    def test_monotone_nonincreasing(self):
        ts = np.linspace(0.0, 5.0, 101)
        vals = [survival_linear_increasing(2, float(t), LAW) for t in ts]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_dominates_constant_boundary(self):
        # a rising boundary is harder to cross than the constant one
        for t in (0.5, 1.5, 3.0):
            assert survival_linear_increasing(2, t, LAW) >= \
                survival_nonincreasing(Boundary.constant(2), t, LAW)

    def test_small_time_fractional_formula(self):
        # before the first integer the survival is just P{Z(t) <= k}
        for t in (0.25, 0.75):
            assert survival_linear_increasing(2, t, LAW) == pytest.approx(
                LAW.cdf(2, t), abs=1e-12)

    def test_reuses_supplied_table(self):
        tab = avoiding_table(2, 10, LAW)
        a = survival_linear_increasing(2, 7.3, LAW, tab)
        b = survival_linear_increasing(2, 7.3, LAW)
        assert a == pytest.approx(b, abs=1e-14)
