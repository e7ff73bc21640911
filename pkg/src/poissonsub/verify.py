"""Verification suites: formula cross-checks, figure-data reproduction and
analytic-vs-Monte-Carlo comparisons.

Each check returns a CheckResult with the measured discrepancy and its
tolerance; the CLI prints one line per check and exits nonzero on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import cpp, crossing, mc
from .iterated import IteratedLaw
from .params import JumpSpec, ModelParams
from .special import SeriesControl, bell_poly, bell_poly_derivative, bell_series

SUITES = ("formula-cross-checks", "figure-reproduction", "analytic-vs-mc")

# per-time continuous-part masses 1 - e^{-lam t (1-e^{-mu})} at mu = 1,
# rounded to 4 decimals, for lam = 1 and lam = 2, t = 1..5
MASS_TABLE = {
    1.0: [0.4685, 0.7175, 0.8499, 0.9202, 0.9576],
    2.0: [0.7175, 0.9202, 0.9775, 0.9936, 0.9982],
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: measured {self.measured:.3e} "
                f"vs tolerance {self.tolerance:.3e}")


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def ks_distance(samples: np.ndarray, cdf, atom_at_zero: float = 0.0) -> float:
    """Kolmogorov distance sup_z |F_emp(z) - F(z)| for a law that is
    continuous except for a possible atom at 0.

    Ties in the sample (the empirical atom) are collapsed so both CDFs are
    compared with their actual jumps, not the per-observation staircase.
    """
    u, counts = np.unique(samples, return_counts=True)
    n = samples.size
    right = np.cumsum(counts) / n
    left = right - counts / n
    f_right = np.asarray(cdf(u), dtype=float)
    f_left = f_right - np.where(u == 0.0, atom_at_zero, 0.0)
    return float(max(np.max(np.abs(right - f_right)),
                     np.max(np.abs(left - f_left))))


def gauss_panel_mass(density_grid, hi: float, panels: int = 64,
                     order: int = 24) -> float:
    """Integral over (0, hi] of a vectorized density, by fixed-order
    Gauss-Legendre quadrature on equal panels."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, hi, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[:-1] + edges[1:])
    zs = (mids[:, None] + half * nodes[None, :]).ravel()
    vals = density_grid(zs).reshape(panels, order)
    return float(np.sum(vals @ weights) * half)


def chi_square_pvalue(counts: np.ndarray, expected: np.ndarray,
                      min_expected: float = 5.0) -> float:
    """Goodness-of-fit p-value, pooling trailing states until every cell has
    expected count >= min_expected."""
    keep = expected >= min_expected
    if keep.all():
        obs, exp = counts.astype(float), expected.astype(float)
    else:
        obs = np.append(counts[keep], counts[~keep].sum())
        exp = np.append(expected[keep], expected[~keep].sum())
    total = counts.sum()
    exp = exp * (total / exp.sum())
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return float(stats.chi2.sf(stat, df=len(obs) - 1))


# -- suites ------------------------------------------------------------------


def formula_cross_checks(ctl: SeriesControl = SeriesControl()) -> list[CheckResult]:
    out = []

    worst = 0.0
    for x in (0.1, 1.0, 10.0, 50.0):
        for n in range(21):
            direct = bell_poly(n, x).value
            series = bell_series(n, x, ctl)
            worst = max(worst, _rel(direct, series))
            if n <= 19:
                rec = x * (bell_poly_derivative(n, x) + direct)
                worst = max(worst, _rel(rec, bell_poly(n + 1, x).value))
    out.append(CheckResult("bell polynomial: direct vs series vs recursion",
                           worst < 1e-9, worst, 1e-9))

    law = IteratedLaw(ModelParams(2.0, 1.0), ctl)
    worst = max(_rel(law.pmf_recursive(n, 1.5), law.pmf(n, 1.5)) for n in range(21))
    out.append(CheckResult("iterated pmf: recurrence vs closed form",
                           worst < 1e-10, worst, 1e-10))

    worst = max(abs(law.cdf_closed_form(n, t) - law.cdf(n, t))
                for n in range(11) for t in (0.0, 0.5, 1.0, 2.0))
    out.append(CheckResult("iterated cdf: Stirling expansion vs partial sum",
                           worst < 1e-12, worst, 1e-12))

    worst = 0.0
    s, t = 0.75, 2.0
    for n in range(11):
        for j in range(n + 1):
            direct = law.conditional_pmf(j, s, t, n)
            worst = max(worst, 0.0 if direct >= 0 else abs(direct))
        tot = math.fsum(law.conditional_pmf(j, s, t, n) for j in range(n + 1))
        worst = max(worst, abs(tot - 1.0))
    out.append(CheckResult("conditional pmf normalizes (Bell convolution identity)",
                           worst < 1e-10, worst, 1e-10))

    params = ModelParams(1.0, 1.0)
    jumps = JumpSpec.exponential(1.0)
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        for z in np.linspace(0.0, 8.0, 17):
            a = cpp.exp_jump_cdf(z, t, params, 1.0, ctl)
            worst = max(worst, abs(a - cpp.cpp_cdf_Z(z, t, params, jumps, ctl)))
            worst = max(worst, abs(a - cpp.exp_jump_cdf_alt(z, t, params, 1.0, ctl)))
    out.append(CheckResult("exponential jumps: direct vs generic vs alternative CDF",
                           worst < 1e-10, worst, 1e-10))

    worst = max(
        abs(cpp.exp_jump_density(z, 1.0, params, 1.0, ctl)
            - cpp.cpp_density_Z(z, 1.0, params, jumps, ctl))
        for z in np.linspace(0.25, 8.0, 16)
    )
    out.append(CheckResult("exponential jumps: density series vs generic mixture",
                           worst < 1e-10, worst, 1e-10))

    worst = 0.0
    for n in range(16):
        conv = math.fsum(law.pmf(j, 0.6) * law.pmf(n - j, 1.4) for j in range(n + 1))
        worst = max(worst, abs(conv - law.pmf(n, 2.0)))
    out.append(CheckResult("iterated pmf semigroup identity",
                           worst < 1e-10, worst, 1e-10))

    worst = 0.0
    for k in (1, 2, 3, 4):
        lim = crossing.hitting_cdf(k, 2000.0 / law.rate, law)
        worst = max(worst, abs(lim - crossing.hitting_probability(k, law.params.mu)))
    out.append(CheckResult("hitting cdf limit equals hitting probability",
                           worst < 1e-8, worst, 1e-8))

    worst = max(
        abs(crossing.crossing_density_constant(k, t, law)
            - crossing.crossing_density_constant_stirling(k, t, law))
        for k in (1, 2, 3, 4) for t in (0.25, 1.0, 2.5)
    )
    out.append(CheckResult("constant-boundary density: direct vs Stirling form",
                           worst < 1e-10, worst, 1e-10))
    return out


def figure_reproduction(ctl: SeriesControl = SeriesControl()) -> list[CheckResult]:
    out = []
    for lam, masses in MASS_TABLE.items():
        params = ModelParams(lam, 1.0)
        worst = max(
            abs((1.0 - cpp.atom_mass_Z(t, params)) - masses[t - 1])
            for t in range(1, 6)
        )
        out.append(CheckResult(
            f"continuous-part masses, lam={lam:g}, t=1..5", worst < 5e-5, worst, 5e-5))
        worst_q = 0.0
        for t in range(1, 6):
            hi = params.lam * t + 12.0 * math.sqrt(2.0 * params.lam * t) + 20.0
            q = gauss_panel_mass(
                lambda z: cpp.exp_jump_density_grid(z, float(t), params, 1.0, ctl),
                hi)
            worst_q = max(worst_q, abs(q - masses[t - 1]))
        out.append(CheckResult(
            f"density quadrature masses, lam={lam:g}, t=1..5",
            worst_q < 1e-4, worst_q, 1e-4))
    return out


def analytic_vs_mc(seed: int = 42, replicates: int = 100_000,
                   ctl: SeriesControl = SeriesControl()) -> list[CheckResult]:
    out = []
    rngs = mc.substreams(seed, 8)

    # empirical pmf of the iterated process vs analytic, chi-square at 1%
    params = ModelParams(4.0, 3.0)
    law = IteratedLaw(params, ctl)
    zs = mc.sample_Z(params, JumpSpec.degenerate_unit(), 1.0, replicates, rngs[0])
    hi = int(zs.max())
    counts = np.bincount(zs.astype(int), minlength=hi + 1)
    expected = replicates * np.array([law.pmf(n, 1.0) for n in range(hi + 1)])
    p = chi_square_pvalue(counts, expected)
    out.append(CheckResult("iterated pmf vs empirical frequencies (chi-square)",
                           p > 0.01, p, 0.01))

    # Kolmogorov band for the continuous-jump CDFs
    band = 1.63 / math.sqrt(replicates)
    params = ModelParams(1.0, 1.0)
    for jumps, label in (
        (JumpSpec.exponential(1.0), "exponential"),
        (JumpSpec.normal(0.5, 1.0), "normal"),
    ):
        zs = mc.sample_Z(params, jumps, 1.0, replicates, rngs[1])
        d = ks_distance(zs, lambda u: cpp.cpp_cdf_Z_grid(u, 1.0, params, jumps, ctl),
                        atom_at_zero=cpp.atom_mass_Z(1.0, params))
        out.append(CheckResult(f"{label}-jump CDF vs empirical (Kolmogorov)",
                               d < band, d, band))

    # atom frequency at 0
    zs = mc.sample_Z(params, JumpSpec.exponential(1.0), 1.0, replicates, rngs[2])
    freq = float(np.mean(zs == 0.0))
    p0 = cpp.atom_mass_Z(1.0, params)
    se = math.sqrt(p0 * (1 - p0) / replicates)
    out.append(CheckResult("atom mass at 0 vs empirical frequency",
                           abs(freq - p0) < 3 * se, abs(freq - p0), 3 * se))

    # constant boundary k=1: crossing times are exponential
    law2 = IteratedLaw(ModelParams(2.0, 1.0), ctl)
    ts = mc.batch_first_crossing(crossing.Boundary.constant(1), law2.params,
                                 mc.default_horizon(law2.params),
                                 min(replicates, 100_000), rngs[3])
    ts = ts[~np.isnan(ts)]
    p = stats.kstest(ts, lambda x: 1.0 - np.exp(-law2.rate * x)).pvalue
    out.append(CheckResult("constant boundary k=1: exponential crossing law (KS)",
                           p > 0.05, p, 0.05))

    # hitting frequencies vs pi_k, and lambda invariance
    for k in (1, 2):
        pik = crossing.hitting_probability(k, 1.0)
        freqs = []
        for i, lam in enumerate((1.0, 2.0)):
            pars = ModelParams(lam, 1.0)
            hs = mc.batch_hitting(k, pars, mc.default_horizon(pars),
                                  replicates, rngs[4 + i])
            freqs.append(float(np.mean(~np.isnan(hs))))
        se = math.sqrt(pik * (1 - pik) / replicates)
        worst = max(abs(f - pik) for f in freqs)
        out.append(CheckResult(f"hitting frequency vs pi_{k} (both lambdas)",
                               worst < 3 * se, worst, 3 * se))

    # strong law and Laplace transform
    params = ModelParams(1.0, 1.0)
    jumps = JumpSpec.exponential(1.0)
    t_long = 200.0
    zs = mc.sample_Z(params, jumps, t_long, replicates, rngs[6])
    target = params.lam * params.mu * jumps.xi
    se = float(np.std(zs / t_long, ddof=1)) / math.sqrt(replicates)
    err = abs(float(np.mean(zs / t_long)) - target)
    out.append(CheckResult("strong-law trend of Z(t)/t", err < 3 * se, err, 3 * se))

    zs = mc.sample_Z(params, jumps, 1.0, replicates, rngs[7])
    worst_sig = 0.0
    for theta in (0.1, 0.5, 1.0):
        vals = np.exp(-theta * zs)
        target = math.exp(-cpp.laplace_exponent(theta, params, jumps))
        se = float(np.std(vals, ddof=1)) / math.sqrt(replicates)
        worst_sig = max(worst_sig, abs(float(np.mean(vals)) - target) / se)
    out.append(CheckResult("Laplace transform vs exponent (3 SE, theta grid)",
                           worst_sig < 3.0, worst_sig, 3.0))
    return out


def run_suite(name: str, seed: int = 42, replicates: int = 100_000) -> list[CheckResult]:
    if name == "formula-cross-checks":
        return formula_cross_checks()
    if name == "figure-reproduction":
        return figure_reproduction()
    if name == "analytic-vs-mc":
        return analytic_vs_mc(seed=seed, replicates=replicates)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
