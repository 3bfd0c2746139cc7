"""
Direct mechanisms: the optimal sequential-screening mechanism and the
generic callable mechanism used for counterexamples and constrained
variants.
"""

from typing import Optional

from model.examples import ScreeningModel
from numerics import QuadratureRule
from numerics.grids import GridLike

from .base import BaseMechanism, CallableMechanism
from .direct import DirectMechanism, EvaluationMode


def build_mechanism(
    model: ScreeningModel,
    rule: Optional[QuadratureRule] = None,
    mode: EvaluationMode = "exact",
    theta_grid: Optional[GridLike] = None,
) -> DirectMechanism:
    environment, signal, family = model
    return DirectMechanism(
        environment, signal, family, rule=rule, mode=mode, theta_grid=theta_grid
    )


def seller_profit(mech: BaseMechanism) -> float:
    return mech.seller_profit()


__all__ = [
    "BaseMechanism",
    "CallableMechanism",
    "DirectMechanism",
    "EvaluationMode",
    "build_mechanism",
    "seller_profit",
]
