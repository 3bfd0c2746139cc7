"""
Optimal Direct Mechanism

Pointwise allocation q*(θ, v) = (α/c · max(φ, 0))^{1/(1−α)}, utilities pinned
down by the two envelope conditions:

    ∂u/∂v = q*^α                       (period 1)
    U′(θ) = −∫ q*(θ, v)^α ∂G/∂θ dv      (period 0), U(θ̲) = 0

Utilities are anchored at the global lower value v̲ = global_lo:
u(θ, v) = u(θ, v̲) + ∫_{v̲}^{v} q*(θ, x)^α dx, where integration by parts gives
u(θ, v̲) = U(θ) − ∫ q*(θ, x)^α (1 − G(x | θ)) dx.
"""

import threading
from collections import OrderedDict
from functools import lru_cache
from typing import Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator

from model.distributions import SignalDistribution
from model.environment import Environment
from model.families import ConditionalValueFamily
from numerics import (
    ExcludedPointError,
    PreconditionError,
    QuadratureRule,
    UndefinedDensityError,
    UnsupportedModelError,
    as_points,
    find_root,
    integrate_many,
)
from numerics.grids import GridLike
from observability.logger import log_debug, log_info
from virtual import VirtualValueField

from .base import BaseMechanism

EvaluationMode = Literal["exact", "tabulated"]

# Sign scan for θ-kinks on the support edges of non-multiplicative families
THETA_KINK_SCAN = 65
THETA_KINK_MARGIN = 1e-9

# Memoized θ values kept per cache, least recently used evicted first
CACHE_SIZE = 4096


class DirectMechanism(BaseMechanism):
    """
    The revenue-optimal sequential-screening mechanism.

    ``mode="exact"`` evaluates U and u(θ, v̲) by nested quadrature at every
    requested θ, memoizing the last ``cache_size`` of them; ``mode="tabulated"``
    computes them on ``theta_grid`` only and interpolates with a monotone cubic.
    """

    name = "optimal"

    def __init__(
        self,
        environment: Environment,
        signal: SignalDistribution,
        family: ConditionalValueFamily,
        rule: Optional[QuadratureRule] = None,
        field: Optional[VirtualValueField] = None,
        mode: EvaluationMode = "exact",
        theta_grid: Optional[GridLike] = None,
        cache_size: int = CACHE_SIZE,
    ):
        super().__init__(environment, signal, family, rule)
        if cache_size < 1:
            raise PreconditionError(f"cache_size must be positive: {cache_size}")
        self.field = field or VirtualValueField(signal, family)
        self.mode = mode
        self.cache_size = cache_size
        self._utility_cache: "OrderedDict[float, float]" = OrderedDict()
        self._base_cache: "OrderedDict[float, float]" = OrderedDict()
        self._lock = threading.Lock()
        root_cache = lru_cache(maxsize=cache_size)
        self._exclusion_root = root_cache(self._solve_exclusion_root)

        self._cutoff = (
            self.field.static_cutoff() if family.is_multiplicative else float("nan")
        )
        self._theta_kinks = self._find_theta_kinks()

        if mode == "tabulated":
            if theta_grid is None:
                raise PreconditionError("tabulated mode needs a theta grid")
            self._tabulate_constants(as_points(theta_grid))
        elif mode != "exact":
            raise PreconditionError(f"unknown evaluation mode: {mode}")

        log_info(
            f"🧮 [Mechanism] built ({mode})",
            family=family.name,
            signal=signal.name,
            alpha=self.alpha,
            cost=self.cost,
        )

    # ------------------------------------------------------------------
    # Allocation
    # ------------------------------------------------------------------

    @property
    def global_lo(self) -> float:
        return self.family.global_lo

    def _clamp(self, theta, v):
        """Off-support values hold the allocation at the nearest support edge."""
        if self.family.extends:
            return v
        return np.clip(
            v, self.family.lower_support(theta), self.family.upper_support(theta)
        )

    def phi(self, theta, v):
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(v, dtype=float)
        return self.field.phi(theta, self._clamp(theta, v))

    def quantity(self, theta, v):
        """q*(θ, v); zero wherever φ < 0."""
        positive = np.maximum(self.phi(theta, v), 0.0)
        return (self.alpha / self.cost * positive) ** (1.0 / (1.0 - self.alpha))

    optimal_quantity = quantity

    def root_quantity(self, theta, v):
        """q*(θ, v)^α, the integrand of both envelope conditions."""
        positive = np.maximum(self.phi(theta, v), 0.0)
        return (self.alpha / self.cost * positive) ** (self.alpha / (1.0 - self.alpha))

    def _solve_exclusion_root(self, theta: float) -> float:
        lo = float(self.family.lower_support(theta))
        hi = float(self.family.upper_support(theta))
        return self.field.exclusion_root(theta, lo, hi)

    def kinks(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.family.is_multiplicative:
            return np.empty(theta.shape + (0,))

        columns = []
        if not self.family.extends:
            columns += [
                np.broadcast_to(self.family.lower_support(theta), theta.shape),
                np.broadcast_to(self.family.upper_support(theta), theta.shape),
            ]
        roots = np.array([self._exclusion_root(t) for t in theta.ravel().tolist()])
        columns.append(roots.reshape(theta.shape))
        return np.stack(columns, axis=-1)

    def theta_kinks(self):
        """Interior θ where U′ has a kink; the θ-integral of U is split there."""
        return self._theta_kinks

    def _find_theta_kinks(self) -> np.ndarray:
        lo, hi = self.signal.theta_lo, self.signal.theta_hi
        if self.family.is_multiplicative:
            crossings = [self._cutoff]
        else:
            crossings = self._edge_crossings(lo, hi)
        margin = THETA_KINK_MARGIN * (hi - lo)
        inner = [
            t for t in crossings if np.isfinite(t) and lo + margin < t < hi - margin
        ]
        return np.unique(np.round(inner, 12))

    def _edge_crossings(self, lo: float, hi: float) -> List[float]:
        """θ where φ changes sign on a support edge, so the excluded set jumps."""
        scan = np.linspace(lo, hi, THETA_KINK_SCAN)
        crossings: List[float] = []
        for edge in (self.family.lower_support, self.family.upper_support):

            def on_edge(t, edge=edge):
                return float(self.phi(t, edge(t)))

            try:
                signs = np.sign([on_edge(t) for t in scan])
            except UndefinedDensityError:
                continue
            crossings += scan[signs == 0].tolist()
            for j in np.flatnonzero(signs[:-1] * signs[1:] < 0):
                crossings.append(find_root(on_edge, scan[j], scan[j + 1]))
        return crossings

    @property
    def exclusion_cutoff(self) -> float:
        """Root of φ_F (multiplicative case), NaN otherwise."""
        return self._cutoff

    # ------------------------------------------------------------------
    # Period-0 envelope
    # ------------------------------------------------------------------

    def envelope_slope(self, theta):
        """U′(θ) = −∫ q*(θ, v)^α ∂G(v | θ)/∂θ dv."""
        theta = np.asarray(theta, dtype=float)
        lo = np.broadcast_to(self.family.lower_support(theta), theta.shape)
        hi = np.broadcast_to(self.family.upper_support(theta), theta.shape)
        tb = theta[..., None]

        def integrand(v):
            return -self.root_quantity(tb, v) * self.family.theta_partial(tb, v)

        return integrate_many(integrand, lo, hi, self.rule, self.kinks(theta))

    def _memoized(self, cache: "OrderedDict[float, float]", compute, theta):
        theta = np.asarray(theta, dtype=float)
        keys = theta.ravel().tolist()
        found: Dict[float, float] = {}
        with self._lock:
            for key in keys:
                if key in cache:
                    cache.move_to_end(key)
                    found[key] = cache[key]

        missing = sorted(set(keys) - found.keys())
        if missing:
            values = np.asarray(compute(np.array(missing)), dtype=float)
            fresh = dict(zip(missing, values.tolist()))
            found.update(fresh)
            with self._lock:
                cache.update(fresh)
                while len(cache) > self.cache_size:
                    cache.popitem(last=False)
        return np.array([found[k] for k in keys], dtype=float).reshape(theta.shape)

    def _utility_exact(self, theta):
        kinks = self.theta_kinks()
        bp = np.broadcast_to(kinks, theta.shape + kinks.shape) if kinks.size else None
        return integrate_many(
            self.envelope_slope, self.signal.theta_lo, theta, self.rule, bp
        )

    def _base_exact(self, theta):
        theta = np.asarray(theta, dtype=float)
        tb = theta[..., None]
        hi = np.broadcast_to(self.family.upper_support(theta), theta.shape)
        lower = np.broadcast_to(self.family.lower_support(theta), theta.shape)
        bp = np.concatenate([lower[..., None], self.kinks(theta)], axis=-1)

        def rent(x):
            return self.root_quantity(tb, x) * (1.0 - self.family.cdf(tb, x))

        tail = integrate_many(rent, self.global_lo, hi, self.rule, bp)
        return self._memoized(self._utility_cache, self._utility_exact, theta) - tail

    def _tabulate_constants(self, thetas: np.ndarray) -> None:
        if thetas.size < 2:
            raise PreconditionError("tabulated mode needs at least 2 θ nodes")
        utilities = self._utility_exact(thetas)
        bases = self._base_exact(thetas)
        self._utility_interp = PchipInterpolator(thetas, utilities)
        self._base_interp = PchipInterpolator(thetas, bases)
        log_debug("📈 [Mechanism] tabulated constants", nodes=int(thetas.size))

    def expected_utility(self, theta):
        """U(θ), zero at θ̲ and nondecreasing under FOSD."""
        theta = self.check_theta(theta)
        if self.mode == "tabulated":
            return self._utility_interp(theta)
        return self._memoized(self._utility_cache, self._utility_exact, theta)

    def base_utility(self, theta):
        """u(θ, v̲) at the global lower value; never positive."""
        theta = self.check_theta(theta)
        if self.mode == "tabulated":
            return self._base_interp(theta)
        return self._memoized(self._base_cache, self._base_exact, theta)

    # ------------------------------------------------------------------
    # Period-1 envelope
    # ------------------------------------------------------------------

    def information_integral(self, theta, v):
        """∫_{v̲}^{v} q*(θ, x)^α dx."""
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        v = np.maximum(v, self.global_lo)
        tb = theta[..., None]
        return integrate_many(
            lambda x: self.root_quantity(tb, x),
            self.global_lo,
            v,
            self.rule,
            self.kinks(theta),
        )

    def expost_utility(self, theta, v):
        """u(θ, v) = u(θ, v̲) + ∫_{v̲}^{v} q*(θ, x)^α dx."""
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        return self.base_utility(theta) + self.information_integral(theta, v)

    def transfer(self, theta, v):
        """t(θ, v) = v·q*^α − u(θ, v)."""
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        return v * self.root_quantity(theta, v) - self.expost_utility(theta, v)

    # ------------------------------------------------------------------
    # Profit and prices
    # ------------------------------------------------------------------

    def virtual_surplus(self) -> float:
        """E[φ·q*^α − c·q*] − U(θ̲); equals seller profit."""
        c = self.cost

        def per_theta(th):
            tb = th[..., None]

            def surplus(v):
                return self.phi(tb, v) * self.root_quantity(tb, v) - c * self.quantity(
                    tb, v
                )

            return self.expect_v(th, surplus, self.kinks(th))

        rents = float(self.expected_utility(self.signal.theta_lo))
        return self.expect_theta(per_theta) - rents

    def marginal_price(self, theta, v):
        """dt/dq = c·v/φ(θ, v); undefined where the point is excluded."""
        theta, v = np.broadcast_arrays(
            np.asarray(theta, dtype=float), np.asarray(v, dtype=float)
        )
        phi = self.phi(theta, v)
        if np.any(phi <= 0):
            i = int(np.flatnonzero((phi <= 0).ravel())[0])
            raise ExcludedPointError(
                f"φ ≤ 0 at θ={theta.ravel()[i]:.12g}, v={v.ravel()[i]:.12g}"
            )
        return self.cost * self._clamp(theta, v) / phi

    def unit_price(self, theta):
        """Constant per-unit price θc/φ_F(θ); +inf for excluded types."""
        if not self.family.is_multiplicative:
            raise UnsupportedModelError(
                "a constant unit price needs multiplicative values"
            )
        theta = np.asarray(theta, dtype=float)
        phi_F = self.field.phi_F(theta)
        safe = np.where(phi_F > 0, phi_F, 1.0)
        return np.where(phi_F > 0, self.cost * theta / safe, np.inf)

    def markup(self, theta):
        """θ/φ_F(θ) − 1."""
        return self.unit_price(theta) / self.cost - 1.0

    # ------------------------------------------------------------------

    def tabulate(self, theta_grid: GridLike, v_grid: GridLike) -> pd.DataFrame:
        """Mechanism table with columns theta, v, phi, q, t, u."""
        thetas = as_points(theta_grid)
        values = as_points(v_grid)
        T, V = np.meshgrid(thetas, values, indexing="ij")
        u = self.expost_utility(T, V)
        frame = pd.DataFrame(
            {
                "theta": T.ravel(),
                "v": V.ravel(),
                "phi": self.phi(T, V).ravel(),
                "q": self.quantity(T, V).ravel(),
                "t": (V * self.root_quantity(T, V) - u).ravel(),
                "u": u.ravel(),
            }
        )
        log_info("📊 [Mechanism] tabulated", rows=len(frame))
        return frame
