"""Model parameter objects shared by the analytic modules and the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc


@dataclass(frozen=True)
class ModelParams:
    """Intensities of the two Poisson processes: ``lam`` drives the
    subordinator N(t), ``mu`` drives the inner process M(t)."""

    lam: float
    mu: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.mu <= 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class JumpSpec:
    """Jump-size law of the summands X_i.

    kind is one of ``degenerate_unit`` (X_i = 1 a.s.), ``exponential``
    (rate ``zeta``) or ``normal`` (mean ``eta``, std ``sigma``).
    """

    kind: str
    zeta: float | None = None
    eta: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.kind == "degenerate_unit":
            pass
        elif self.kind == "exponential":
            if self.zeta is None or self.zeta <= 0:
                raise ValueError("exponential jumps require zeta > 0")
        elif self.kind == "normal":
            if self.sigma is None or self.sigma <= 0:
                raise ValueError("normal jumps require sigma > 0")
            if self.eta is None:
                raise ValueError("normal jumps require a mean eta")
        else:
            raise ValueError(f"unknown jump kind {self.kind!r}")

    @classmethod
    def degenerate_unit(cls) -> "JumpSpec":
        return cls("degenerate_unit")

    @classmethod
    def exponential(cls, zeta: float) -> "JumpSpec":
        return cls("exponential", zeta=zeta)

    @classmethod
    def normal(cls, eta: float, sigma: float) -> "JumpSpec":
        return cls("normal", eta=eta, sigma=sigma)

    @property
    def is_continuous(self) -> bool:
        return self.kind in ("exponential", "normal")

    @property
    def xi(self) -> float:
        """Jump mean E{X_1}."""
        if self.kind == "degenerate_unit":
            return 1.0
        if self.kind == "exponential":
            return 1.0 / self.zeta
        return self.eta

    @property
    def sigma2(self) -> float:
        """Jump variance Var(X_1)."""
        if self.kind == "degenerate_unit":
            return 0.0
        if self.kind == "exponential":
            return 1.0 / self.zeta**2
        return self.sigma**2

    def mgf(self, s: float) -> float:
        """Moment generating function E{e^{sX}} inside its convergence region."""
        if self.kind == "degenerate_unit":
            return math.exp(s)
        if self.kind == "exponential":
            if s >= self.zeta:
                raise ValueError(
                    f"mgf of exponential({self.zeta}) jumps diverges for s >= zeta "
                    f"(got s = {s})"
                )
            return self.zeta / (self.zeta - s)
        return math.exp(self.eta * s + 0.5 * self.sigma**2 * s**2)

    def conv_cdf(self, n: int, z):
        """n-fold convolution CDF F_X^{(n)}(z) in closed form, n >= 1."""
        if n < 1:
            raise ValueError("convolution order must be >= 1")
        z = np.asarray(z, dtype=float)
        if self.kind == "degenerate_unit":
            out = np.where(z >= n, 1.0, 0.0)
        elif self.kind == "exponential":
            out = np.where(z >= 0, sc.gammainc(n, self.zeta * np.maximum(z, 0.0)), 0.0)
        else:
            out = sc.ndtr((z - n * self.eta) / (self.sigma * math.sqrt(n)))
        return out if out.ndim else float(out)

    def conv_pdf(self, n: int, z):
        """n-fold convolution density f_X^{(n)}(z); continuous kinds only."""
        if n < 1:
            raise ValueError("convolution order must be >= 1")
        if not self.is_continuous:
            raise ValueError("degenerate_unit jumps have no density")
        z = np.asarray(z, dtype=float)
        if self.kind == "exponential":
            zz = self.zeta * np.maximum(z, 0.0)
            with np.errstate(divide="ignore"):
                logpdf = (
                    math.log(self.zeta)
                    + (n - 1) * np.log(zz, out=np.full_like(zz, -np.inf), where=zz > 0)
                    - zz
                    - sc.gammaln(n)
                )
            out = np.where(z > 0, np.exp(logpdf), np.where((z == 0) & (n == 1), self.zeta, 0.0))
        else:
            s = self.sigma * math.sqrt(n)
            out = np.exp(-0.5 * ((z - n * self.eta) / s) ** 2) / (s * math.sqrt(2 * math.pi))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class MomentSummary:
    """First two moments of Z(t) plus the jump-law inputs they derive from."""

    mean: float
    variance: float
    dispersion_index: float
    xi: float
    sigma2: float
