# tests/conftest.py
"""
Shared fixtures: the running uniform example (θ ~ U[1, 2], v = θ·z with
z ~ U[½, 1], α = ½, c = 1) and the counterexample models.

Mechanisms memoize their envelope constants, so they are session-scoped.
"""

import numpy as np
import pandas as pd
import pytest

from contracts import build_committed_spend, build_two_part_tariff
from mechanism import build_mechanism
from model import (
    ConditionalValueFamily,
    ScreeningModel,
    example1_model,
    load_tabulated_family,
    mixture_model,
    shifted_model,
)
from numerics import Grid

EXAMPLE1_THETAS = Grid.linspace(1.0, 2.0, 11)


@pytest.fixture(scope="session")
def example1():
    """Fixture providing the Example 1 model."""
    return example1_model()


@pytest.fixture(scope="session")
def mech(example1):
    """Fixture providing the optimal mechanism for Example 1."""
    return build_mechanism(example1)


@pytest.fixture(scope="session")
def thetas():
    """Fixture providing an 11-point signal grid on [1, 2]."""
    return EXAMPLE1_THETAS


@pytest.fixture(scope="session")
def tariff(mech):
    """Fixture providing the two-part tariff on the 11-point grid."""
    return build_two_part_tariff(mech, EXAMPLE1_THETAS, 41)


@pytest.fixture(scope="session")
def committed(mech):
    """Fixture providing the committed-spend contract on the 11-point grid."""
    return build_committed_spend(mech, EXAMPLE1_THETAS, 41)


@pytest.fixture(scope="session")
def shifted_mech():
    """Fixture providing the shifted-support mechanism (exclusion below θ = 0.75)."""
    return build_mechanism(shifted_model())


@pytest.fixture(scope="session")
def mixture_mech():
    """Fixture providing the bimodal-signal mechanism (irregular)."""
    return build_mechanism(mixture_model())


@pytest.fixture(scope="session")
def additive_family():
    """Fixture providing the non-multiplicative family v = θ + z − 1, z ~ U[0, 1]."""

    def inside(t, v):
        return (v >= t - 1.0) & (v <= t)

    return ConditionalValueFamily(
        cdf=lambda t, v: np.clip(v - t + 1.0, 0.0, 1.0),
        pdf=lambda t, v: np.where(inside(t, v), 1.0, 0.0),
        lower_support=lambda t: t - 1.0,
        upper_support=lambda t: t,
        global_lo=0.0,
        global_hi=2.0,
        theta_partial=lambda t, v: np.where(inside(t, v), -1.0, 0.0),
        name="additive",
    )


@pytest.fixture(scope="session")
def additive_mech(example1, additive_family):
    """Fixture providing the optimal mechanism for the additive family."""
    return build_mechanism(
        ScreeningModel(example1.environment, example1.signal, additive_family)
    )


@pytest.fixture(scope="session")
def example1_table(tmp_path_factory):
    """Fixture providing Example 1 as a 41 × 61 CSV, v̲(θ) off the v nodes."""
    thetas = np.linspace(1.0, 2.0, 41)
    values = np.linspace(0.5, 2.0, 61)
    T, V = np.meshgrid(thetas, values, indexing="ij")
    z = V / T
    inside = (z >= 0.5) & (z <= 1.0)
    frame = pd.DataFrame(
        {
            "theta": T.ravel(),
            "v": V.ravel(),
            "G": np.clip(2 * z - 1, 0.0, 1.0).ravel(),
            "g": np.where(inside, 2 / T, 0.0).ravel(),
            "dG_dtheta": np.where(inside, -2 * V / T**2, 0.0).ravel(),
        }
    )
    path = tmp_path_factory.mktemp("tables") / "example1_table.csv"
    frame.to_csv(path, index=False)
    return path


@pytest.fixture(scope="session")
def tabulated_mech(example1, example1_table):
    """Fixture providing the Example 1 mechanism solved from its table."""
    family = load_tabulated_family(example1_table)
    return build_mechanism(
        ScreeningModel(example1.environment, example1.signal, family)
    )
