"""First-crossing and first-hitting machinery for the iterated Poisson process.

Covers nonincreasing boundaries (survival in closed form), the constant
boundary (crossing density and mean), the first-hitting time of a state
(density, CDF, hitting probability) and the linearly increasing boundary
(iterative avoiding-probability table and piecewise survival).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .iterated import IteratedLaw
from .special import (
    bell_poly,
    bell_poly_derivative,
    lower_incomplete_gamma,
    stirling2,
)

_NONINCREASING = ("constant", "linear_decreasing", "general_nonincreasing")


@dataclass(frozen=True)
class Boundary:
    """Boundary beta_k(t) with beta_k(0) = k >= 1.

    Kinds: constant (k), linear_decreasing (k - t, unit slope),
    linear_increasing (k + t, unit slope), or a caller-supplied
    nonincreasing function.
    """

    kind: str
    k: int
    func: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.kind not in _NONINCREASING + ("linear_increasing",):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.k < 1:
            raise ValueError(f"boundary level at t=0 must be >= 1, got {self.k}")
        if self.kind == "general_nonincreasing" and self.func is None:
            raise ValueError("general_nonincreasing requires an evaluable function")

    @classmethod
    def constant(cls, k: int) -> "Boundary":
        return cls("constant", k)

    @classmethod
    def linear_decreasing(cls, k: int) -> "Boundary":
        return cls("linear_decreasing", k)

    @classmethod
    def linear_increasing(cls, k: int) -> "Boundary":
        return cls("linear_increasing", k)

    @classmethod
    def nonincreasing(cls, k: int, func: Callable[[float], float]) -> "Boundary":
        return cls("general_nonincreasing", k, func)

    @property
    def is_nonincreasing(self) -> bool:
        return self.kind in _NONINCREASING

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return float(self.k)
        if self.kind == "linear_decreasing":
            return self.k - t
        if self.kind == "linear_increasing":
            return self.k + t
        return float(self.func(t))


def _strict_floor(x: float) -> int:
    """Largest integer strictly smaller than x (so 3 -> 2, 2.7 -> 2)."""
    return math.ceil(x) - 1


def survival_nonincreasing(boundary: Boundary, t: float, law: IteratedLaw) -> float:
    """P{T > t} for a nonincreasing boundary: the CDF of Z(t) just below
    the boundary level.  Reports 0 once the boundary has reached 0."""
    if not boundary.is_nonincreasing:
        raise ValueError("survival_nonincreasing handles nonincreasing boundaries; "
                         "use survival_linear_increasing for the increasing case")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    b = boundary.value(t)
    if b <= 0:
        return 0.0
    return law.cdf(_strict_floor(b), t)


def crossing_density_constant(k: int, t: float, law: IteratedLaw) -> float:
    """First-crossing density through the constant boundary k:
    psi(t) = -d/dt P_{k-1}(t), differentiated term by term."""
    if k < 1:
        raise ValueError(f"boundary level must be >= 1, got {k}")
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    lam, mu = law.params.lam, law.params.mu
    a = law.rate
    c = lam * math.exp(-mu)
    ct = c * t
    e = math.exp(-a * t)
    total = 0.0
    for j in range(k):
        coef = mu**j / math.factorial(j)
        total += a * e * coef * bell_poly(j, ct).value
        total -= e * coef * c * bell_poly_derivative(j, ct)
    return max(0.0, total)


def crossing_density_constant_stirling(k: int, t: float, law: IteratedLaw) -> float:
    """Stirling-expanded form of the constant-boundary crossing density,
    kept as a cross-check.  The bracketed power sum starts at i = 1 (the
    printed i = 0 start double counts the constant term)."""
    if k < 1:
        raise ValueError(f"boundary level must be >= 1, got {k}")
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    lam, mu = law.params.lam, law.params.mu
    a = law.rate
    c = lam * math.exp(-mu)
    ct = c * t
    p0 = math.exp(-a * t)

    def C(i: int) -> float:
        return math.fsum(
            stirling2(j, i) * mu**j / math.factorial(j) for j in range(i, k)
        )

    s1 = 1.0 + math.fsum(ct**i * C(i) for i in range(1, k))
    s2 = math.fsum(i * ct ** (i - 1) * C(i) for i in range(1, k))
    return p0 * a * s1 - p0 * c * s2


def mean_crossing_time_constant(k: int, law: IteratedLaw) -> float:
    """E(T) for the constant boundary k, in closed form: the integral of
    the survival P_{k-1}(t) over [0, inf)."""
    if k < 1:
        raise ValueError(f"boundary level must be >= 1, got {k}")
    mu = law.params.mu
    em1 = math.expm1(mu)  # e^mu - 1
    inner = 0.0
    for i in range(1, k):
        ci = math.fsum(
            stirling2(j, i) * mu**j / math.factorial(j) for j in range(i, k)
        )
        inner += math.factorial(i) / em1**i * ci
    return (1.0 + inner) / law.rate


def hitting_density(k: int, t: float, law: IteratedLaw) -> float:
    """Density of the first-hitting time of state k (defective: integrates
    to pi_k < 1)."""
    if k < 1:
        raise ValueError(f"state must be >= 1, got {k}")
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    lam, mu = law.params.lam, law.params.mu
    ct = lam * math.exp(-mu) * t
    return (
        math.exp(-mu)
        * mu**k
        / math.factorial(k)
        * lam
        * math.exp(-law.rate * t)
        * bell_poly_derivative(k, ct)
    )


def hitting_cdf(k: int, t: float, law: IteratedLaw) -> float:
    """CDF of the first-hitting time of state k; tends to pi_k as t -> inf.

    The Stirling sum formally includes j = 0, which vanishes because
    S2(k, 0) = 0 for k >= 1 (this is what makes F_H(0) = 0)."""
    if k < 1:
        raise ValueError(f"state must be >= 1, got {k}")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    lam, mu = law.params.lam, law.params.mu
    a = law.rate
    ct = lam * math.exp(-mu) * t
    em1 = math.expm1(mu)
    gam = math.fsum(
        stirling2(k, j) * lower_incomplete_gamma(j + 1, a * t) / em1**j
        for j in range(0, k + 1)
    )
    val = mu**k / math.factorial(k) * (math.exp(-a * t) * bell_poly(k, ct).value + gam)
    return min(1.0, max(0.0, val))


def hitting_probability(k: int, mu: float) -> float:
    """pi_k = P{state k is ever visited}; independent of lam and in (0, 1]."""
    if k < 1:
        raise ValueError(f"state must be >= 1, got {k}")
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    em1 = math.expm1(mu)
    s = math.fsum(
        stirling2(k, j) * math.factorial(j) / em1**j for j in range(1, k + 1)
    )
    return mu**k / math.factorial(k) * s


@dataclass(frozen=True)
class AvoidingTable:
    """Triangular array g[n][j] = P{Z(n) = j, T > n} for the boundary k + t.

    Row n covers 0 <= j <= k + n - 1 (row 0 is just [1.0])."""

    k: int
    horizon: int
    rows: list[np.ndarray] = field(repr=False)

    def survival_at_integer(self, n: int) -> float:
        if not 0 <= n <= self.horizon:
            raise ValueError(f"row {n} outside horizon {self.horizon}")
        return float(self.rows[n].sum())


def avoiding_table(k: int, horizon: int, law: IteratedLaw) -> AvoidingTable:
    """Iteratively build the avoiding probabilities for beta(t) = k + t at
    integer times 0..horizon."""
    if k < 1:
        raise ValueError(f"boundary offset must be >= 1, got {k}")
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    rows = [np.array([1.0])]
    if horizon >= 1:
        # unit-time pmf vector, long enough for every convolution below
        pvec = np.array([law.pmf(j, 1.0) for j in range(k + horizon)])
        for n in range(1, horizon + 1):
            rows.append(np.convolve(rows[-1], pvec)[: k + n])
    return AvoidingTable(k=k, horizon=horizon, rows=rows)


def survival_linear_increasing(k: int, t: float, law: IteratedLaw,
                               table: AvoidingTable | None = None) -> float:
    """P{T > t} for the boundary beta(t) = k + t, via the avoiding table at
    n = floor(t) plus one convolution step over the fractional part."""
    if k < 1:
        raise ValueError(f"boundary offset must be >= 1, got {k}")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    n = int(math.floor(t))
    if table is None or table.horizon < n or table.k != k:
        table = avoiding_table(k, n, law)
    elapsed = t - n
    if elapsed == 0.0:
        return table.survival_at_integer(n)
    g = table.rows[n]  # entries j = 0..k+n-1; g(k+n; n) == 0 by construction
    return float(math.fsum(
        g[m] * law.cdf(k + n - m, elapsed) for m in range(len(g))
    ))
