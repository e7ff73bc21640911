"""Tests for the verification harness: statistics helpers and suite runs."""

import math

import numpy as np
import pytest
from scipy import stats

from poissonsub import verify
from poissonsub import mc


class TestKsDistance:
    def test_continuous_matches_scipy(self):
        rng = mc.make_rng(0)
        xs = rng.standard_normal(5000)
        d = verify.ks_distance(xs, lambda u: stats.norm.cdf(u))
        ref = stats.kstest(xs, "norm").statistic
        assert d == pytest.approx(ref, abs=1e-12)

    def test_atom_handled(self):
        # mixture: mass 0.5 at 0, else Exp(1); the naive staircase statistic
        # would report ~0.5 here
        rng = mc.make_rng(1)
        n = 50_000
        xs = np.where(rng.random(n) < 0.5, 0.0, rng.exponential(1.0, n))

        def cdf(u):
            u = np.asarray(u, dtype=float)
            return np.where(u < 0, 0.0, 0.5 + 0.5 * (1 - np.exp(-u)))

        d = verify.ks_distance(xs, cdf, atom_at_zero=0.5)
        assert d < 1.63 / math.sqrt(n)

    def test_detects_mismatch(self):
        rng = mc.make_rng(2)
        xs = rng.exponential(2.0, 10_000)
        d = verify.ks_distance(xs, lambda u: 1 - np.exp(-np.asarray(u)))
        assert d > 0.1


class TestChiSquare:
    def test_uniform_counts(self):
        rng = mc.make_rng(3)
        obs = np.bincount(rng.integers(0, 10, 10_000), minlength=10).astype(float)
        assert verify.chi_square_pvalue(obs, np.full(10, 1000.0)) > 0.01

    def test_pools_small_cells(self):
        obs = np.array([100.0, 50.0, 2.0, 1.0])
        exp = np.array([99.0, 51.0, 2.0, 1.0])
        p = verify.chi_square_pvalue(obs, exp)
        assert 0.0 <= p <= 1.0

    def test_rejects_wrong_model(self):
        obs = np.array([900.0, 100.0])
        exp = np.array([500.0, 500.0])
        assert verify.chi_square_pvalue(obs, exp) < 1e-6


class TestGaussPanelMass:
    def test_polynomial_exact(self):
        assert verify.gauss_panel_mass(lambda z: 3 * z**2, 2.0) == \
            pytest.approx(8.0, rel=1e-12)

    def test_gaussian_tail(self):
        mass = verify.gauss_panel_mass(
            lambda z: np.exp(-z**2 / 2) / math.sqrt(2 * math.pi), 10.0)
        assert mass == pytest.approx(0.5, rel=1e-10)


class TestSuites:
    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            verify.run_suite("no-such-suite")

    def test_formula_cross_checks_all_pass(self):
        results = verify.run_suite("formula-cross-checks")
        assert results and all(r.passed for r in results)

    def test_figure_reproduction_all_pass(self):
        results = verify.run_suite("figure-reproduction")
        assert results and all(r.passed for r in results)

    def test_analytic_vs_mc_reduced(self):
        results = verify.run_suite("analytic-vs-mc", seed=42, replicates=20_000)
        assert results and all(r.passed for r in results)

    def test_result_line_format(self):
        r = verify.CheckResult(name="demo", measured=1e-3, tolerance=1e-2,
                               passed=True)
        line = r.line()
        assert line.startswith("[PASS] demo:") and "1.000e-03" in line
