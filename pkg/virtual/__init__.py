"""
Virtual values: the dynamic virtual value φ(θ, v), the static virtual value
φ_F(θ) and the regularity diagnostics that license the pointwise solution.
"""

from .field import CallableVirtualValueField, VirtualValueField
from .regularity import mhr_check, regularity_check


def dynamic_virtual_value(field: VirtualValueField, theta: float, v: float) -> float:
    return float(field.phi(theta, v))


def static_virtual_value(field: VirtualValueField, theta: float) -> float:
    return float(field.phi_F(theta))


__all__ = [
    "CallableVirtualValueField",
    "VirtualValueField",
    "dynamic_virtual_value",
    "mhr_check",
    "regularity_check",
    "static_virtual_value",
]
