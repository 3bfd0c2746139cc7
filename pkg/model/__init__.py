"""
Economic environment and distribution families: the signal distribution F,
the conditional value family G(v | θ), the multiplicative case v = θ·z and
the closed-form spot-market best response.
"""

from .diagnostics import DiagnosticReport, fosd_check
from .distributions import BoundedDistribution, SignalDistribution
from .environment import Environment
from .examples import (
    ScreeningModel,
    bimodal_mixture_signal,
    example1_model,
    mixture_model,
    shifted_model,
)
from .families import ConditionalValueFamily, MultiplicativeFamily, reciprocal_family
from .spot import spot_best_response, spot_payoff, spot_quantity
from .tabulated import TabulatedFamily, load_tabulated_family

__all__ = [
    "BoundedDistribution",
    "ConditionalValueFamily",
    "DiagnosticReport",
    "Environment",
    "MultiplicativeFamily",
    "ScreeningModel",
    "SignalDistribution",
    "TabulatedFamily",
    "bimodal_mixture_signal",
    "example1_model",
    "fosd_check",
    "load_tabulated_family",
    "mixture_model",
    "reciprocal_family",
    "shifted_model",
    "spot_best_response",
    "spot_payoff",
    "spot_quantity",
]
