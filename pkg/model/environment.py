"""
Economic primitives: demand elasticity, marginal cost and the two frictions.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Environment(BaseModel):
    """Buyer utility v·q^α − t, seller payoff t − q·c, plus optional frictions."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0.0, lt=1.0, description="Demand elasticity exponent α.")
    cost: float = Field(gt=0.0, description="Constant marginal cost c.")
    gamma: float = Field(
        default=0.0, ge=0.0, description="Linear penalty γ on period-0 payments."
    )
    spot_price: Optional[float] = Field(
        default=None, description="Posted spot-market price pˢ (must exceed cost)."
    )

    @model_validator(mode="after")
    def _spot_above_cost(self) -> "Environment":
        if self.spot_price is not None and not self.spot_price > self.cost:
            raise ValueError(
                f"spot_price {self.spot_price} must exceed cost {self.cost}"
            )
        return self

    @property
    def exponent(self) -> float:
        """1 / (1 − α), the curvature of the optimal quantity in φ."""
        return 1.0 / (1.0 - self.alpha)
