"""
Conditional value families G(v | θ).

All methods take (theta, v) in that order, broadcast numpy arrays, and
describe the distribution of the realized value v given the signal θ.
"""

from typing import Callable, Optional

import numpy as np

from numerics import derivative_many

from .distributions import BoundedDistribution

ArrayFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ConditionalValueFamily:
    """
    A family of value distributions indexed by the signal.

    ``theta_partial`` is optional: without a closed form, ∂G/∂θ falls back to
    a central difference. ``extends`` declares whether the dynamic virtual
    value may be evaluated where g(v | θ) = 0 (off a type's own support).
    """

    is_multiplicative = False

    def __init__(
        self,
        cdf: ArrayFn,
        pdf: ArrayFn,
        lower_support: Callable[[np.ndarray], np.ndarray],
        upper_support: Callable[[np.ndarray], np.ndarray],
        global_lo: float,
        global_hi: float,
        theta_partial: Optional[ArrayFn] = None,
        extends: bool = False,
        name: str = "custom",
    ):
        self._cdf = cdf
        self._pdf = pdf
        self._lower = lower_support
        self._upper = upper_support
        self._theta_partial = theta_partial
        self.global_lo = float(global_lo)
        self.global_hi = float(global_hi)
        self.extends = extends
        self.name = name

    def cdf(self, theta, v):
        """G(v | θ)."""
        return np.asarray(self._cdf(np.asarray(theta, float), np.asarray(v, float)))

    def pdf(self, theta, v):
        """g(v | θ)."""
        return np.asarray(self._pdf(np.asarray(theta, float), np.asarray(v, float)))

    def theta_partial(self, theta, v):
        """∂G(v | θ)/∂θ, analytic when available."""
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(v, dtype=float)
        if self._theta_partial is not None:
            return np.asarray(self._theta_partial(theta, v))
        theta, v = np.broadcast_arrays(theta, v)
        return derivative_many(lambda t: self.cdf(t, v), theta)

    def lower_support(self, theta):
        """v̲(θ) = inf{v : g(v | θ) > 0}."""
        return np.asarray(self._lower(np.asarray(theta, dtype=float)), dtype=float)

    def upper_support(self, theta):
        return np.asarray(self._upper(np.asarray(theta, dtype=float)), dtype=float)

    def __repr__(self):
        return (
            f"{type(self).__name__}({self.name}, "
            f"v∈[{self.global_lo:g}, {self.global_hi:g}])"
        )


class MultiplicativeFamily(ConditionalValueFamily):
    """v = θ·z with z ~ H independent of θ."""

    is_multiplicative = True

    def __init__(self, shock: BoundedDistribution, theta_lo: float, theta_hi: float):
        if theta_lo <= 0 or shock.lo < 0:
            raise ValueError("multiplicative values need θ > 0 and z ≥ 0")
        self.shock = shock

        super().__init__(
            cdf=lambda theta, v: shock.cdf(v / theta),
            pdf=lambda theta, v: shock.pdf(v / theta) / theta,
            lower_support=lambda theta: theta * shock.lo,
            upper_support=lambda theta: theta * shock.hi,
            global_lo=theta_lo * shock.lo,
            global_hi=theta_hi * shock.hi,
            theta_partial=lambda theta, v: -(v / theta**2) * shock.pdf(v / theta),
            extends=True,
            name=f"multiplicative[{shock.name}]",
        )

    @property
    def z_lo(self) -> float:
        return self.shock.lo

    @property
    def z_hi(self) -> float:
        return self.shock.hi

    def z_cdf(self, z):
        return self.shock.cdf(z)

    def z_pdf(self, z):
        return self.shock.pdf(z)


def reciprocal_family(
    shock: BoundedDistribution, theta_lo: float, theta_hi: float
) -> ConditionalValueFamily:
    """v = z/θ: higher signals shift values down, so FOSD fails by construction."""
    return ConditionalValueFamily(
        cdf=lambda theta, v: shock.cdf(v * theta),
        pdf=lambda theta, v: shock.pdf(v * theta) * theta,
        lower_support=lambda theta: shock.lo / theta,
        upper_support=lambda theta: shock.hi / theta,
        global_lo=shock.lo / theta_hi,
        global_hi=shock.hi / theta_lo,
        theta_partial=lambda theta, v: v * shock.pdf(v * theta),
        name=f"reciprocal[{shock.name}]",
    )
