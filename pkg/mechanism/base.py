"""
Base Mechanism Class

Every direct mechanism (optimal, perturbed, spot-constrained) exposes the
allocation q(θ, v) and transfer t(θ, v); utilities, cross-report payoffs and
seller profit follow from those two by quadrature.
"""

from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np

from model.distributions import SignalDistribution
from model.environment import Environment
from model.families import ConditionalValueFamily
from numerics import DomainError, QuadratureRule, default_rule, integrate_many

THETA_SLACK = 1e-12


class BaseMechanism(ABC):
    """Abstract base class for direct mechanisms (θ, v) → (q, t)."""

    name: str = "mechanism"

    def __init__(
        self,
        environment: Environment,
        signal: SignalDistribution,
        family: ConditionalValueFamily,
        rule: Optional[QuadratureRule] = None,
    ):
        self.environment = environment
        self.signal = signal
        self.family = family
        self.rule = rule or default_rule()

    @property
    def alpha(self) -> float:
        return self.environment.alpha

    @property
    def cost(self) -> float:
        return self.environment.cost

    @abstractmethod
    def quantity(self, theta, v):
        """Allocation q(θ, v) ≥ 0."""

    @abstractmethod
    def transfer(self, theta, v):
        """Total payment t(θ, v)."""

    # ------------------------------------------------------------------
    # Kinks of the integrands; subclasses report them to keep quadrature
    # pieces smooth.
    # ------------------------------------------------------------------

    def kinks(self, theta) -> Optional[np.ndarray]:
        """Values v where q(θ, ·) has a kink, shape ``theta.shape + (k,)``."""
        return None

    def theta_kinks(self) -> np.ndarray:
        """Signals where the mechanism changes regime."""
        return np.empty(0)

    # ------------------------------------------------------------------

    def check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        lo, hi = self.signal.theta_lo, self.signal.theta_hi
        if np.any(theta < lo - THETA_SLACK) or np.any(theta > hi + THETA_SLACK):
            raise DomainError(f"θ outside the signal support [{lo:g}, {hi:g}]")
        return np.clip(theta, lo, hi)

    def expost_utility(self, theta, v):
        """u(θ, v) = v·q^α − t."""
        v = np.asarray(v, dtype=float)
        return v * self.quantity(theta, v) ** self.alpha - self.transfer(theta, v)

    def expect_v(self, theta, integrand: Callable, breakpoints=None):
        """
        E_v[integrand(v) | θ] over the type's own support.

        ``integrand`` receives v nodes of shape ``theta.shape + (n,)``.
        """
        theta = np.asarray(theta, dtype=float)
        lo = np.broadcast_to(self.family.lower_support(theta), theta.shape)
        hi = np.broadcast_to(self.family.upper_support(theta), theta.shape)
        tb = theta[..., None]

        def weighted(v):
            return self.family.pdf(tb, v) * integrand(v)

        return integrate_many(weighted, lo, hi, self.rule, breakpoints)

    def interim_payoff(self, theta, report):
        """
        w(θ, θ′): expected payoff of a type-θ buyer who reports θ′ and then
        reports v truthfully.
        """
        theta, report = np.broadcast_arrays(
            self.check_theta(theta), self.check_theta(report)
        )
        rb = report[..., None]
        kinks = self.kinks(report)

        def payoff(v):
            return v * self.quantity(rb, v) ** self.alpha - self.transfer(rb, v)

        return self.expect_v(theta, payoff, kinks)

    def expected_utility(self, theta):
        """U(θ) = E_v[u(θ, v) | θ]."""
        theta = self.check_theta(theta)
        return self.interim_payoff(theta, theta)

    def expect_theta(self, per_theta: Callable) -> float:
        """∫ f(θ)·per_theta(θ) dθ over the signal support."""
        kinks = self.theta_kinks()
        return float(
            integrate_many(
                lambda th: self.signal.pdf(th) * per_theta(th),
                self.signal.theta_lo,
                self.signal.theta_hi,
                self.rule,
                kinks if kinks.size else None,
            )
        )

    def expected_payment(self) -> float:
        def per_theta(th):
            tb = th[..., None]
            return self.expect_v(th, lambda v: self.transfer(tb, v), self.kinks(th))

        return self.expect_theta(per_theta)

    def expected_quantity(self) -> float:
        def per_theta(th):
            tb = th[..., None]
            return self.expect_v(th, lambda v: self.quantity(tb, v), self.kinks(th))

        return self.expect_theta(per_theta)

    def seller_profit(self) -> float:
        """E_{θ,v}[t − c·q]."""
        c = self.cost

        def per_theta(th):
            tb = th[..., None]
            return self.expect_v(
                th,
                lambda v: self.transfer(tb, v) - c * self.quantity(tb, v),
                self.kinks(th),
            )

        return self.expect_theta(per_theta)

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, α={self.alpha:g}, c={self.cost:g})"


class CallableMechanism(BaseMechanism):
    """A mechanism given by arbitrary q and t callables."""

    def __init__(
        self,
        environment: Environment,
        signal: SignalDistribution,
        family: ConditionalValueFamily,
        quantity: Callable,
        transfer: Callable,
        rule: Optional[QuadratureRule] = None,
        name: str = "callable",
    ):
        super().__init__(environment, signal, family, rule)
        self._quantity = quantity
        self._transfer = transfer
        self.name = name

    def _call(self, fn, theta, v):
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        return np.broadcast_to(np.asarray(fn(theta, v), dtype=float), theta.shape)

    def quantity(self, theta, v):
        return self._call(self._quantity, theta, v)

    def transfer(self, theta, v):
        return self._call(self._transfer, theta, v)

    @classmethod
    def null(cls, environment, signal, family, rule=None) -> "CallableMechanism":
        """q ≡ 0, t ≡ 0."""
        zero = lambda theta, v: np.zeros_like(theta)  # noqa: E731
        return cls(environment, signal, family, zero, zero, rule, name="null")
