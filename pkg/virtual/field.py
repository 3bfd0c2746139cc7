"""
Dynamic and static virtual values.

φ(θ, v) = v + [(1 − F(θ)) / f(θ)] · [∂G(v | θ)/∂θ / g(v | θ)]
φ_F(θ)  = θ − (1 − F(θ)) / f(θ)

In the multiplicative case φ is computed as (v/θ)·φ_F(θ), which extends it
to the whole rectangle [θ̲, θ̄] × [global_lo, global_hi].
"""

from typing import Callable, Optional

import numpy as np

from model.distributions import SignalDistribution
from model.families import ConditionalValueFamily
from numerics import (
    BracketError,
    UndefinedDensityError,
    UnsupportedModelError,
    find_root,
)


class VirtualValueField:
    """φ and φ_F for one (F, G) pair; immutable after construction."""

    def __init__(self, signal: SignalDistribution, family: ConditionalValueFamily):
        self.signal = signal
        self.family = family

    @property
    def is_multiplicative(self) -> bool:
        return self.family.is_multiplicative

    @property
    def extends(self) -> bool:
        """Whether φ may be evaluated off a type's own support."""
        return self.family.extends

    @property
    def theta_lo(self) -> float:
        return self.signal.theta_lo

    @property
    def theta_hi(self) -> float:
        return self.signal.theta_hi

    def hazard(self, theta):
        return self.signal.hazard(theta)

    def phi_F(self, theta):
        """Static virtual value θ − (1 − F)/f."""
        theta = np.asarray(theta, dtype=float)
        return theta - self.signal.hazard(theta)

    def information_rent(self, theta, v):
        """(1 − F)/f · (∂G/∂θ)/g, the non-positive correction inside φ."""
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        hazard = self.signal.hazard(theta)
        density = self.family.pdf(theta, v)
        partial = self.family.theta_partial(theta, v)

        undefined = (density <= 0) & (hazard > 0)
        if undefined.any():
            i = np.flatnonzero(undefined.ravel())[0]
            t_bad, v_bad = float(theta.ravel()[i]), float(v.ravel()[i])
            raise UndefinedDensityError(
                f"g(v | θ) vanishes at θ={t_bad:.12g}, v={v_bad:.12g}",
                theta=t_bad,
                v=v_bad,
            )
        safe = np.where(density > 0, density, 1.0)
        return np.where(hazard > 0, hazard * partial / safe, 0.0)

    def phi(self, theta, v):
        """Dynamic virtual value; equals v at the top type."""
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.is_multiplicative:
            return (v / theta) * self.phi_F(theta)
        return v + self.information_rent(theta, v)

    def in_support(self, theta, v):
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(v, dtype=float)
        return (v >= self.family.lower_support(theta)) & (
            v <= self.family.upper_support(theta)
        )

    def evaluable(self, theta, v):
        """Mask of points where φ is defined."""
        if self.extends:
            return np.ones(np.broadcast(np.asarray(theta), np.asarray(v)).shape, bool)
        return self.in_support(theta, v)

    def exclusion_root(self, theta: float, lo: float, hi: float) -> float:
        """
        v in [lo, hi] where φ(θ, ·) changes sign, NaN when it does not.

        Never needed in the multiplicative case: the sign of φ is that of
        φ_F(θ) for every v > 0.
        """
        if self.is_multiplicative or hi <= lo:
            return float("nan")
        try:
            return find_root(lambda x: float(self.phi(theta, x)), lo, hi)
        except BracketError:
            return float("nan")

    def static_cutoff(self) -> float:
        """Root of φ_F on [θ̲, θ̄], NaN when φ_F keeps one sign."""
        if not self.is_multiplicative:
            raise UnsupportedModelError("φ_F cutoff needs a multiplicative family")
        try:
            return find_root(
                lambda t: float(self.phi_F(t)), self.theta_lo, self.theta_hi
            )
        except BracketError:
            return float("nan")


class CallableVirtualValueField(VirtualValueField):
    """A field given directly by φ(θ, v); used for checks on synthetic inputs."""

    def __init__(
        self,
        phi: Callable,
        theta_lo: float,
        theta_hi: float,
        phi_F: Optional[Callable] = None,
    ):
        self._phi = phi
        self._phi_F = phi_F
        self._bounds = (float(theta_lo), float(theta_hi))

    @property
    def is_multiplicative(self) -> bool:
        return self._phi_F is not None

    @property
    def extends(self) -> bool:
        return True

    @property
    def theta_lo(self) -> float:
        return self._bounds[0]

    @property
    def theta_hi(self) -> float:
        return self._bounds[1]

    def phi(self, theta, v):
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        return np.broadcast_to(np.asarray(self._phi(theta, v), float), theta.shape)

    def phi_F(self, theta):
        if self._phi_F is None:
            raise UnsupportedModelError("this field has no static virtual value")
        return np.asarray(self._phi_F(np.asarray(theta, dtype=float)), dtype=float)
