"""Monte Carlo oracle: path simulation of the subordinated compound Poisson
process, first-crossing and first-hitting samplers, and vectorized batch
samplers used for large verification runs.

All randomness flows through numpy Generators seeded from a SeedSequence;
replicates get independent spawned substreams so results are reproducible
regardless of how the work is split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crossing import Boundary
from .params import JumpSpec, ModelParams


@dataclass(frozen=True)
class SimConfig:
    seed: int
    replicates: int = 1
    horizon: float = 1.0

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.horizon <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")


@dataclass(frozen=True)
class PathSample:
    """One trajectory: subordinator event times with cumulative jump values."""

    epochs: np.ndarray
    increments: np.ndarray
    cumulative: np.ndarray

    def value_at(self, t: float) -> float:
        """Z(t): cumulative value at the last epoch <= t (0 before the first)."""
        i = int(np.searchsorted(self.epochs, t, side="right"))
        return float(self.cumulative[i - 1]) if i > 0 else 0.0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def substreams(seed: int, n: int) -> list[np.random.Generator]:
    """Independent substreams derived deterministically from a master seed."""
    return [np.random.Generator(np.random.PCG64(ss))
            for ss in np.random.SeedSequence(seed).spawn(n)]


def default_horizon(params: ModelParams) -> float:
    """Covers ~50 mean sojourn times, so censoring bias is negligible."""
    return 50.0 / (params.lam * (1.0 - math.exp(-params.mu)))


def sample_W(jumps: JumpSpec, mu: float, rng: np.random.Generator) -> float:
    """One jump of the subordinated process: a Poisson(mu) count of X draws."""
    k = int(rng.poisson(mu))
    if jumps.kind == "degenerate_unit":
        return float(k)
    if k == 0:
        return 0.0
    if jumps.kind == "exponential":
        return float(rng.exponential(1.0 / jumps.zeta, k).sum())
    return float(rng.normal(jumps.eta, jumps.sigma, k).sum())


def simulate_path(params: ModelParams, jumps: JumpSpec, horizon: float,
                  rng: np.random.Generator) -> PathSample:
    """Exponential(lam) inter-arrival epochs up to the horizon, one compound
    jump per epoch."""
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    epochs = []
    t = rng.exponential(1.0 / params.lam)
    while t <= horizon:
        epochs.append(t)
        t += rng.exponential(1.0 / params.lam)
    increments = np.array([sample_W(jumps, params.mu, rng) for _ in epochs])
    return PathSample(
        epochs=np.array(epochs),
        increments=increments,
        cumulative=np.cumsum(increments) if len(epochs) else np.array([]),
    )


def _descent_crossing(boundary: Boundary, level: float, t_lo: float,
                      t_hi: float) -> float | None:
    """Earliest s in (t_lo, t_hi] with beta(s) <= level, for a nonincreasing
    boundary and the process sitting at `level`; None if no such s."""
    if boundary.kind == "constant":
        return None
    if boundary.kind == "linear_decreasing":
        s = boundary.k - level
        return s if t_lo < s <= t_hi else None
    if boundary.value(t_hi) > level:
        return None
    lo, hi = t_lo, t_hi
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if boundary.value(mid) <= level:
            hi = mid
        else:
            lo = mid
    return hi


def first_crossing_sample(boundary: Boundary, params: ModelParams,
                          jumps: JumpSpec, horizon: float,
                          rng: np.random.Generator) -> float | None:
    """First t with Z(t) >= beta(t), or None if censored at the horizon.

    For nonincreasing boundaries the inter-jump descent of the boundary
    through the current level is detected as well as jump-epoch crossings.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    t, z = 0.0, 0.0
    while True:
        e = t + rng.exponential(1.0 / params.lam)
        if boundary.is_nonincreasing:
            s = _descent_crossing(boundary, z, t, min(e, horizon))
            if s is not None:
                return s
        if e > horizon:
            return None
        z += sample_W(jumps, params.mu, rng)
        if z >= boundary.value(e):
            return e
        t = e


def hitting_sample(k: int, params: ModelParams, horizon: float,
                   rng: np.random.Generator) -> float | None:
    """First epoch at which the iterated process lands exactly on state k;
    None if it jumps over k or is censored at the horizon."""
    if k < 1:
        raise ValueError(f"state must be >= 1, got {k}")
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    t, z = 0.0, 0
    while True:
        t += rng.exponential(1.0 / params.lam)
        if t > horizon:
            return None
        z += int(rng.poisson(params.mu))
        if z == k:
            return t
        if z > k:
            return None


# -- vectorized batch samplers (same laws, exact in distribution) ------------


def sample_Z(params: ModelParams, jumps: JumpSpec, t: float, size: int,
             rng: np.random.Generator) -> np.ndarray:
    """size draws of Z(t).  Conditional on the subordinator count N the total
    number of inner jumps is Poisson(mu N), and the jump total collapses to a
    closed-form law (count / gamma / normal), so no path loop is needed."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0.0:
        return np.zeros(size)
    n = rng.poisson(params.lam * t, size)
    k = rng.poisson(params.mu * n.astype(float))
    if jumps.kind == "degenerate_unit":
        return k.astype(float)
    if jumps.kind == "exponential":
        return rng.standard_gamma(k.astype(float)) / jumps.zeta
    return jumps.eta * k + jumps.sigma * np.sqrt(k) * rng.standard_normal(size)


def batch_first_crossing(boundary: Boundary, params: ModelParams, horizon: float,
                         size: int, rng: np.random.Generator,
                         max_rounds: int = 100_000) -> np.ndarray:
    """Vectorized first-crossing times for the iterated process (unit jumps);
    censored paths get NaN."""
    t = np.zeros(size)
    z = np.zeros(size)
    out = np.full(size, np.nan)
    active = np.arange(size)
    for _ in range(max_rounds):
        if active.size == 0:
            return out
        e = t[active] + rng.exponential(1.0 / params.lam, active.size)
        if boundary.is_nonincreasing and boundary.kind != "constant":
            if boundary.kind == "linear_decreasing":
                s = boundary.k - z[active]
                desc = (t[active] < s) & (s <= np.minimum(e, horizon))
            else:
                s = np.array([
                    _descent_crossing(boundary, zi, ti, min(ei, horizon)) or np.nan
                    for zi, ti, ei in zip(z[active], t[active], e)
                ])
                desc = ~np.isnan(s)
            out[active[desc]] = s[desc]
            keep = ~desc
            active, e = active[keep], e[keep]
        censored = e > horizon
        active, e = active[~censored], e[~censored]
        if active.size == 0:
            return out
        z[active] += rng.poisson(params.mu, active.size)
        beta = np.array([boundary.value(ei) for ei in e]) \
            if boundary.kind == "general_nonincreasing" else (
                boundary.k + e if boundary.kind == "linear_increasing"
                else boundary.k - e if boundary.kind == "linear_decreasing"
                else np.full(e.size, float(boundary.k)))
        crossed = z[active] >= beta
        out[active[crossed]] = e[crossed]
        t[active] = e
        active = active[~crossed]
    raise RuntimeError("batch_first_crossing did not converge")


def batch_hitting(k: int, params: ModelParams, horizon: float, size: int,
                  rng: np.random.Generator,
                  max_rounds: int = 100_000) -> np.ndarray:
    """Vectorized hitting times of state k for the iterated process; NaN for
    paths that overshoot k or are censored."""
    if k < 1:
        raise ValueError(f"state must be >= 1, got {k}")
    t = np.zeros(size)
    z = np.zeros(size, dtype=np.int64)
    out = np.full(size, np.nan)
    active = np.arange(size)
    for _ in range(max_rounds):
        if active.size == 0:
            return out
        t[active] += rng.exponential(1.0 / params.lam, active.size)
        censored = t[active] > horizon
        active = active[~censored]
        if active.size == 0:
            return out
        z[active] += rng.poisson(params.mu, active.size)
        hit = z[active] == k
        out[active[hit]] = t[active[hit]]
        active = active[z[active] < k]
    raise RuntimeError("batch_hitting did not converge")
