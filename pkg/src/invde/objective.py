"""The optimization problem: starting stocks -> Monte Carlo mean cost."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .catalog import ProductCatalog
from .demand import demand_matrix
from .simulator import Mode, PolicyParams, SimConfig, batch_costs, summarize, McsSummary

# replications per objective evaluation during search
OPTIMIZATION_SAMPLES = 30
# replications when scoring a final policy
SCORING_SAMPLES = 1000


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper must be 1-d and of equal length")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def __len__(self):
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    @classmethod
    def for_catalog(cls, catalog: ProductCatalog) -> "Bounds":
        """``[0, starting_stock]`` per product."""
        ss = catalog.column("starting_stock")
        return cls(np.zeros_like(ss), ss)

    @classmethod
    def box(cls, lo: float, hi: float, dim: int) -> "Bounds":
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))


def repair(x, bounds: Bounds) -> np.ndarray:
    """Clip ``x`` (a vector or a population of row vectors) into the box."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot repair non-finite coordinates")
    return np.clip(x, bounds.lower, bounds.upper)


def derive_reorder_levels(catalog: ProductCatalog) -> np.ndarray:
    """``mu * L + sqrt(L) * sigma`` for every product."""
    mu = catalog.column("demand_mean")
    sigma = catalog.column("demand_std")
    lead = catalog.column("lead_time").astype(np.float64)
    return mu * lead + np.sqrt(lead) * sigma


def derive_order_quantities(reorder_levels, x) -> np.ndarray:
    r = np.asarray(reorder_levels, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if r.shape[-1] != x.shape[-1]:
        raise ValueError(f"length mismatch: {r.shape[-1]} reorder levels, {x.shape[-1]} stocks")
    return np.maximum(r - x, 0.0)


def policy_for(catalog: ProductCatalog, x, mode: Mode = "continuous-review") -> PolicyParams:
    r = derive_reorder_levels(catalog)
    return PolicyParams(tuple(r), tuple(derive_order_quantities(r, x)), mode=mode)


class InventoryObjective:
    """Mean simulated cost of a starting-stock vector.

    All evaluations share one demand array drawn from ``config.seed``
    (common random numbers), so the function is deterministic in ``x``.
    ``calls`` counts individual evaluations, batched or not.
    """

    def __init__(self, catalog: ProductCatalog, config: SimConfig | None = None,
                 mode: Mode = "continuous-review"):
        self.catalog = catalog
        self.config = config if config is not None else SimConfig(num_simulations=OPTIMIZATION_SAMPLES)
        self.mode = mode
        self.bounds = Bounds.for_catalog(catalog)
        self.reorder_levels = derive_reorder_levels(catalog)
        self._demand = demand_matrix(catalog, self.config.seed, self.config.num_simulations,
                                     self.config.horizon_days)
        self.calls = 0

    @property
    def dim(self) -> int:
        return len(self.catalog)

    def _run(self, X: np.ndarray):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise ValueError(f"x has length {X.shape[1]}, catalog has {self.dim} products")
        X = repair(X, self.bounds)
        Q = derive_order_quantities(self.reorder_levels, np.floor(X + 0.5))
        return batch_costs(self.catalog, self._demand, X, Q, self.reorder_levels, self.config, self.mode)

    def evaluate_batch(self, X) -> np.ndarray:
        costs, _ = self._run(X)
        self.calls += costs.shape[0]
        return costs.sum(axis=2).mean(axis=1)

    def __call__(self, x) -> float:
        return float(self.evaluate_batch(np.asarray(x)[None, :])[0])

    def summary(self, x) -> McsSummary:
        """Full Monte Carlo summary for one vector (does not count as a call)."""
        costs, inv = self._run(np.asarray(x)[None, :])
        return summarize(costs[0], inv[0], self.config.horizon_days)


def evaluate(x, catalog: ProductCatalog, config: SimConfig,
             mode: Mode = "continuous-review") -> float:
    """Mean cost of starting stocks ``x`` (repaired, then rounded) under ``config``."""
    return InventoryObjective(catalog, config, mode)(x)


def rescore(x, catalog: ProductCatalog, config: SimConfig, samples: int = SCORING_SAMPLES,
            seed_offset: int = 1, mode: Mode = "continuous-review") -> float:
    """Score ``x`` on fresh replications, independent of the search demand."""
    seed = (config.seed + seed_offset) % 2**64
    return evaluate(x, catalog, replace(config, num_simulations=samples, seed=seed), mode)
