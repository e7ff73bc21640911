"""Law of the iterated Poisson process Z(t) = M[N(t)].

Z is a compound Poisson process whose jumps are Poisson(mu) counts; its pmf
is a Bell-polynomial series.  The direct log-space evaluation is the
production path; the recurrence and the Stirling-expanded CDF are retained
as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams
from .special import SeriesControl, log_bell_series, stirling2


@dataclass(frozen=True)
class IteratedLaw:
    params: ModelParams
    ctl: SeriesControl = field(default_factory=SeriesControl)

    # -- shorthand -----------------------------------------------------------

    @property
    def rate(self) -> float:
        """Total jump rate lam*(1 - e^{-mu}): exits from any state are
        exponential with this parameter."""
        return self.params.lam * (1.0 - math.exp(-self.params.mu))

    def _bell_arg(self, t: float) -> float:
        return self.params.lam * t * math.exp(-self.params.mu)

    # -- pmf / cdf -----------------------------------------------------------

    def log_pmf(self, n: int, t: float) -> float:
        if n < 0:
            raise ValueError(f"state must be nonnegative, got {n}")
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        if t == 0.0:
            return 0.0 if n == 0 else -math.inf
        mu = self.params.mu
        return (
            -self.rate * t
            + n * math.log(mu)
            - math.lgamma(n + 1)
            + log_bell_series(n, self._bell_arg(t), self.ctl)
        )

    def pmf(self, n: int, t: float) -> float:
        """p_n(t) = e^{-lam t (1-e^{-mu})} mu^n/n! B_n(lam t e^{-mu})."""
        return math.exp(self.log_pmf(n, t))

    def pmf_recursive(self, n: int, t: float) -> float:
        """p_n(t) via the binomial-recurrence of the Bell polynomials;
        cross-check for pmf()."""
        if n < 0:
            raise ValueError(f"state must be nonnegative, got {n}")
        if t <= 0:
            raise ValueError(f"time must be positive, got {t}")
        lam, mu = self.params.lam, self.params.mu
        c = lam * math.exp(-mu) * t
        p = [self.pmf(0, t)]
        for m in range(1, n + 1):
            acc = math.fsum(
                mu ** (m - k + 1) / math.factorial(m - k) * p[k - 1]
                for k in range(1, m + 1)
            )
            p.append(c * acc / m)
        return p[n]

    def pmf_vector(self, t: float, tail: float | None = None) -> np.ndarray:
        """p_0(t)..p_N(t) with N chosen so the remaining mass is below
        ``tail`` (defaults to ctl.tolerance)."""
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        if t == 0.0:
            return np.array([1.0])
        tol = self.ctl.tolerance if tail is None else tail
        out = []
        cum = 0.0
        n = 0
        while n < self.ctl.max_terms:
            p = self.pmf(n, t)
            out.append(p)
            cum += p
            if 1.0 - cum < tol:
                break
            n += 1
        return np.array(out)

    def cdf(self, n: int, t: float) -> float:
        """P_n(t), partial sum of the pmf.  Production path."""
        if n < 0:
            raise ValueError(f"state must be nonnegative, got {n}")
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        if t == 0.0:
            return 1.0
        return min(1.0, math.fsum(self.pmf(j, t) for j in range(n + 1)))

    def cdf_closed_form(self, n: int, t: float) -> float:
        """Stirling-expanded form of P_n(t), kept for cross-validation.

        The inner power sum starts at k = 1: starting it at k = 0 double
        counts the constant term and gives P_n(0) = 2 for n >= 1.
        """
        if n < 0:
            raise ValueError(f"state must be nonnegative, got {n}")
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        lam, mu = self.params.lam, self.params.mu
        ct = self._bell_arg(t)
        inner = 0.0
        if n >= 1:
            inner = math.fsum(
                ct**k
                * math.fsum(stirling2(j, k) * mu**j / math.factorial(j) for j in range(k, n + 1))
                for k in range(1, n + 1)
            )
        return math.exp(-self.rate * t) * (1.0 + inner)

    # -- conditional law, moments, sojourn -----------------------------------

    def conditional_pmf(self, k: int, s: float, t: float, n: int) -> float:
        """P{Z(s) = k | Z(t) = n} for 0 < s < t; binomial-like in the Bell
        polynomial ratio, evaluated in log space."""
        if not 0 < s < t:
            raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        if n == 0:
            return 1.0
        log_choose = (
            math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        )
        return math.exp(
            log_choose
            + log_bell_series(k, self._bell_arg(s), self.ctl)
            + log_bell_series(n - k, self._bell_arg(t - s), self.ctl)
            - log_bell_series(n, self._bell_arg(t), self.ctl)
        )

    def mean_sojourn(self, n: int) -> float:
        """E{S_n} = (1/lam) mu^n/n! sum_{k>=0} k^n e^{-mu k}, with 0^0 = 1
        so that n = 0 reduces to the exponential-sojourn mean."""
        if n < 0:
            raise ValueError(f"state must be nonnegative, got {n}")
        lam, mu = self.params.lam, self.params.mu
        if n == 0:
            # geometric series sum_{k>=0} e^{-mu k}
            return 1.0 / (lam * (1.0 - math.exp(-mu)))
        log_tol = math.log(self.ctl.tolerance)
        total = -math.inf
        k = 1
        while k < self.ctl.max_terms:
            lt = n * math.log(k) - mu * k
            total = np.logaddexp(total, lt)
            # past the mode k ~ n/mu the terms decay at least geometrically
            if k > n / mu and lt < total + log_tol:
                break
            k += 1
        return math.exp(n * math.log(mu) - math.lgamma(n + 1) + float(total)) / lam


def dispersion_index(params: ModelParams) -> float:
    """var/mean ratio of Z(t): 1 + mu, independent of t (overdispersed)."""
    return 1.0 + params.mu


def levy_exponent_limit_check(theta: float, xi: float, mu: float) -> tuple[float, float]:
    """Exponent of Z at (lam = xi/mu, mu) next to the Poisson(xi) exponent
    xi(1 - e^{-theta}); the two coincide as mu -> 0."""
    if xi <= 0:
        raise ValueError(f"xi must be positive, got {xi}")
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    lam = xi / mu
    psi = lam * (1.0 - math.exp(-mu * (1.0 - math.exp(-theta))))
    return psi, xi * (1.0 - math.exp(-theta))
