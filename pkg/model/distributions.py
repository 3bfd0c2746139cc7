"""
Bounded one-dimensional distributions for the signal θ and the demand shock z.

Parametric shapes come from ``scipy.stats`` frozen distributions; every
method is numpy-vectorized.
"""

from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from numerics import (
    PreconditionError,
    QuadratureRule,
    UndefinedDensityError,
    integrate,
)


class BoundedDistribution:
    """A distribution supported on [lo, hi] with cdf and pdf callables."""

    def __init__(
        self,
        lo: float,
        hi: float,
        cdf: Callable[[np.ndarray], np.ndarray],
        pdf: Callable[[np.ndarray], np.ndarray],
        name: str = "custom",
    ):
        if not lo < hi:
            raise PreconditionError(f"support must satisfy lo < hi: [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)
        self._cdf = cdf
        self._pdf = pdf
        self.name = name

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        inner = np.where(x > self.hi, 1.0, self._cdf(x))
        return np.clip(np.where(x < self.lo, 0.0, inner), 0.0, 1.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, self._pdf(x), 0.0)

    def mean(self, rule: Optional[QuadratureRule] = None) -> float:
        return integrate(lambda x: x * self.pdf(x), self.lo, self.hi, rule)

    def moment(self, k: int, rule: Optional[QuadratureRule] = None) -> float:
        return integrate(lambda x: x**k * self.pdf(x), self.lo, self.hi, rule)

    def total_mass(self, rule: Optional[QuadratureRule] = None) -> float:
        return integrate(self.pdf, self.lo, self.hi, rule)

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, [{self.lo:g}, {self.hi:g}])"

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_frozen(cls, frozen, lo: float, hi: float, name: str):
        return cls(lo, hi, frozen.cdf, frozen.pdf, name=name)

    @classmethod
    def uniform(cls, lo: float, hi: float):
        return cls.from_frozen(stats.uniform(loc=lo, scale=hi - lo), lo, hi, "uniform")

    @classmethod
    def beta(cls, a: float, b: float, lo: float, hi: float):
        frozen = stats.beta(a, b, loc=lo, scale=hi - lo)
        return cls.from_frozen(frozen, lo, hi, f"beta({a:g},{b:g})")

    @classmethod
    def truncnorm(cls, mean: float, std: float, lo: float, hi: float):
        frozen = stats.truncnorm(
            (lo - mean) / std, (hi - mean) / std, loc=mean, scale=std
        )
        return cls.from_frozen(frozen, lo, hi, f"truncnorm({mean:g},{std:g})")

    @classmethod
    def uniform_mixture(cls, components: Sequence[Tuple[float, float, float]]):
        """Weighted mixture of uniforms; components are (weight, lo, hi)."""
        weights = np.array([c[0] for c in components], dtype=float)
        if np.any(weights <= 0) or not np.isclose(weights.sum(), 1.0):
            raise PreconditionError("mixture weights must be positive and sum to 1")
        parts = [stats.uniform(loc=a, scale=b - a) for _, a, b in components]

        def cdf(x):
            return sum(w * p.cdf(x) for w, p in zip(weights, parts))

        def pdf(x):
            return sum(w * p.pdf(x) for w, p in zip(weights, parts))

        lo = min(c[1] for c in components)
        hi = max(c[2] for c in components)
        return cls(lo, hi, cdf, pdf, name="uniform_mixture")


class SignalDistribution(BoundedDistribution):
    """Distribution F of the period-0 signal θ on [θ̲, θ̄]."""

    @property
    def theta_lo(self) -> float:
        return self.lo

    @property
    def theta_hi(self) -> float:
        return self.hi

    def hazard(self, theta):
        """(1 − F(θ)) / f(θ), the informational-rent weight."""
        theta = np.asarray(theta, dtype=float)
        density = self.pdf(theta)
        if np.any(density <= 0):
            bad = float(np.broadcast_to(theta, density.shape)[density <= 0].flat[0])
            raise UndefinedDensityError(
                f"signal density vanishes at θ={bad:.12g}", theta=bad
            )
        return (1.0 - self.cdf(theta)) / density

    @classmethod
    def from_distribution(cls, dist: BoundedDistribution) -> "SignalDistribution":
        return cls(dist.lo, dist.hi, dist._cdf, dist._pdf, name=dist.name)
