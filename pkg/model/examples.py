"""
Built-in models: the running uniform example and the counterexamples used by
the diagnostics (shifted support, bimodal signal mixture).
"""

from typing import NamedTuple, Optional

from .distributions import BoundedDistribution, SignalDistribution
from .environment import Environment
from .families import ConditionalValueFamily, MultiplicativeFamily

# Bimodal signal: two narrow uniforms plus a thin uniform floor keeping f > 0.
BIMODAL_COMPONENTS = ((0.45, 1.0, 1.1), (0.45, 1.9, 2.0), (0.10, 1.0, 2.0))


class ScreeningModel(NamedTuple):
    environment: Environment
    signal: SignalDistribution
    family: ConditionalValueFamily


def _environment(alpha, cost, gamma, spot_price) -> Environment:
    return Environment(alpha=alpha, cost=cost, gamma=gamma, spot_price=spot_price)


def example1_model(
    alpha: float = 0.5,
    cost: float = 1.0,
    gamma: float = 0.0,
    spot_price: Optional[float] = None,
) -> ScreeningModel:
    """θ ~ U[1, 2], v = θ·z with z ~ U[½, 1]."""
    signal = SignalDistribution.uniform(1.0, 2.0)
    shock = BoundedDistribution.uniform(0.5, 1.0)
    return ScreeningModel(
        _environment(alpha, cost, gamma, spot_price),
        signal,
        MultiplicativeFamily(shock, signal.theta_lo, signal.theta_hi),
    )


def shifted_model(
    alpha: float = 0.5,
    cost: float = 1.0,
    gamma: float = 0.0,
    spot_price: Optional[float] = None,
) -> ScreeningModel:
    """θ ~ U[0.5, 1.5]: φ_F(θ) = 2θ − 1.5 is negative below θ = 0.75."""
    signal = SignalDistribution.uniform(0.5, 1.5)
    shock = BoundedDistribution.uniform(0.5, 1.0)
    return ScreeningModel(
        _environment(alpha, cost, gamma, spot_price),
        signal,
        MultiplicativeFamily(shock, signal.theta_lo, signal.theta_hi),
    )


def bimodal_mixture_signal() -> SignalDistribution:
    return SignalDistribution.from_distribution(
        BoundedDistribution.uniform_mixture(BIMODAL_COMPONENTS)
    )


def mixture_model(
    alpha: float = 0.5,
    cost: float = 1.0,
    gamma: float = 0.0,
    spot_price: Optional[float] = None,
) -> ScreeningModel:
    """Example 1 values under a bimodal signal; hazard rate jumps up at 1.1."""
    signal = bimodal_mixture_signal()
    shock = BoundedDistribution.uniform(0.5, 1.0)
    return ScreeningModel(
        _environment(alpha, cost, gamma, spot_price),
        signal,
        MultiplicativeFamily(shock, signal.theta_lo, signal.theta_hi),
    )
