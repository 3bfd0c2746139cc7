"""
Indirect implementations of the optimal mechanism: the two-part tariff and
the committed-spend contract, with their diagnostics.
"""

from .committed import (
    CommittedSpendContract,
    build_committed_spend,
    guaranteed_positive_quantity,
    knife_edge_average_price,
    linear_pricing_diagnostic,
)
from .diagnostics import marginal_price_monotonicity, uniqueness_condition
from .paths import EquilibriumPaths, sample_paths, unit_prices
from .schedule import PriceSchedule
from .tariff import TwoPartTariff, build_two_part_tariff

__all__ = [
    "CommittedSpendContract",
    "EquilibriumPaths",
    "PriceSchedule",
    "TwoPartTariff",
    "build_committed_spend",
    "build_two_part_tariff",
    "guaranteed_positive_quantity",
    "knife_edge_average_price",
    "linear_pricing_diagnostic",
    "marginal_price_monotonicity",
    "sample_paths",
    "uniqueness_condition",
    "unit_prices",
]
