"""Daily inventory dynamics and Monte Carlo aggregation."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from . import _kernel
from .catalog import ProductCatalog
from .demand import demand_matrix

CostModel = Literal["breakdown", "paper-loop"]
ArrivalModel = Literal["pipeline", "immediate"]
Mode = Literal["continuous-review", "cross-dock"]

COST_MODELS = ("breakdown", "paper-loop")
ARRIVAL_MODELS = ("pipeline", "immediate")
MODES = ("continuous-review", "cross-dock")

TRACE_COLUMNS = ("day", "product_id", "on_hand", "on_order", "demand", "sold", "ordered", "cost_total")


def round_half_up(values) -> np.ndarray:
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5).astype(np.int64)


@dataclass(frozen=True)
class PolicyParams:
    reorder_levels: tuple[float, ...]
    order_quantities: tuple[float, ...]
    safety_stocks: tuple[float, ...] | None = None
    mode: Mode = "continuous-review"

    def __post_init__(self):
        r = tuple(float(v) for v in self.reorder_levels)
        q = tuple(float(v) for v in self.order_quantities)
        s = tuple(float(v) for v in self.safety_stocks) if self.safety_stocks is not None else (0.0,) * len(r)
        if not (len(r) == len(q) == len(s)):
            raise ValueError("reorder_levels, order_quantities and safety_stocks differ in length")
        if any(v < 0 or not np.isfinite(v) for v in r + q + s):
            raise ValueError("policy entries must be finite and >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "reorder_levels", r)
        object.__setattr__(self, "order_quantities", q)
        object.__setattr__(self, "safety_stocks", s)

    def __len__(self):
        return len(self.reorder_levels)


@dataclass(frozen=True)
class SimConfig:
    horizon_days: int = 365
    num_simulations: int = 1000
    seed: int = 0
    cost_model: CostModel = "breakdown"
    arrival_model: ArrivalModel = "pipeline"

    def __post_init__(self):
        if self.horizon_days < 0:
            raise ValueError("horizon_days must be >= 0")
        if self.num_simulations < 1:
            raise ValueError("num_simulations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.cost_model not in COST_MODELS:
            raise ValueError(f"cost_model must be one of {COST_MODELS}")
        if self.arrival_model not in ARRIVAL_MODELS:
            raise ValueError(f"arrival_model must be one of {ARRIVAL_MODELS}")


@dataclass(frozen=True)
class CostBreakdown:
    purchase: float = 0.0
    order: float = 0.0
    holding: float = 0.0
    stockout: float = 0.0

    @property
    def total(self) -> float:
        return self.purchase + self.order + self.holding + self.stockout

    @classmethod
    def from_array(cls, a) -> "CostBreakdown":
        return cls(*(float(v) for v in a[:4]))

    def as_dict(self) -> dict:
        return {"purchase": self.purchase, "order": self.order, "holding": self.holding,
                "stockout": self.stockout, "total": self.total}


@dataclass
class SimResult:
    cost: CostBreakdown
    total_inventory_level: float
    revenue: float
    units_sold: np.ndarray
    orders_placed: np.ndarray
    units_purchased: np.ndarray
    units_crossdocked: np.ndarray
    total_demand: np.ndarray
    trace: np.ndarray | None = None
    product_ids: list[str] = field(default_factory=list)

    def write_trace(self, path: str | Path) -> None:
        if self.trace is None:
            raise ValueError("result carries no daily trace")
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_COLUMNS)
            for t in range(self.trace.shape[0]):
                for i, pid in enumerate(self.product_ids):
                    on_hand, on_order, d, sold, ordered, c, _ = self.trace[t, i]
                    w.writerow([t, pid, int(on_hand), int(on_order), int(d), int(sold), int(ordered), repr(float(c))])


@dataclass
class McsSummary:
    mean_cost: float
    average_cost: float
    average_inventory_level: float
    replication_costs: np.ndarray
    mean_breakdown: CostBreakdown
    num_simulations: int
    horizon_days: int

    def as_dict(self) -> dict:
        return {
            "mean_cost": self.mean_cost,
            "average_cost": self.average_cost,
            "average_inventory_level": self.average_inventory_level,
            "cost_breakdown": self.mean_breakdown.as_dict(),
            "num_simulations": self.num_simulations,
            "horizon_days": self.horizon_days,
        }


def _check_vector(x, catalog: ProductCatalog, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(catalog),):
        raise ValueError(f"{name} has length {x.size}, catalog has {len(catalog)} products")
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise ValueError(f"{name} must be finite and >= 0")
    return x


def _kernel_args(catalog: ProductCatalog, policy: PolicyParams, config: SimConfig):
    if len(policy) != len(catalog):
        raise ValueError(f"policy covers {len(policy)} products, catalog has {len(catalog)}")
    return dict(
        reorder=np.array(policy.reorder_levels, dtype=np.float64),
        lead=catalog.column("lead_time"),
        pc=catalog.column("purchase_cost"),
        oc=catalog.column("order_cost"),
        hc=catalog.column("holding_cost"),
        cost_model=_kernel.BREAKDOWN if config.cost_model == "breakdown" else _kernel.PAPER_LOOP,
        immediate=config.arrival_model == "immediate",
        crossdock=policy.mode == "cross-dock",
    )


def simulate_once(catalog: ProductCatalog, x, policy: PolicyParams, config: SimConfig,
                  replication: int = 0, trace: bool = False) -> SimResult:
    """One replication of the daily loop.

    Each day, per product: order ``q`` when on-hand plus on-order falls below
    the reorder level, receive due arrivals, sell ``min(demand, stock)`` with
    lost sales, then charge holding and stockout per ``config.cost_model``.
    ``x`` (starting stock) and the order quantities are rounded half-up.
    """
    x = _check_vector(x, catalog, "x")
    args = _kernel_args(catalog, policy, config)
    demand = demand_matrix(catalog, config.seed, replication + 1, config.horizon_days)[replication]
    n = len(catalog)
    cost = np.zeros(4)
    sold, xdock, orders, bought = (np.zeros(n, dtype=np.int64) for _ in range(4))
    tr = np.zeros((config.horizon_days, n, 7)) if trace else np.zeros((0, 0, 7))
    inv = _kernel.run_replication(
        demand, round_half_up(x), args["reorder"], round_half_up(policy.order_quantities),
        args["lead"], args["pc"], args["oc"], args["hc"], args["cost_model"],
        args["immediate"], args["crossdock"], cost, sold, xdock, orders, bought, tr, trace,
    )
    return SimResult(
        cost=CostBreakdown.from_array(cost),
        total_inventory_level=float(inv),
        revenue=float(np.dot(catalog.column("selling_price"), sold)),
        units_sold=sold,
        orders_placed=orders,
        units_purchased=bought,
        units_crossdocked=xdock,
        total_demand=demand.sum(axis=1),
        trace=tr if trace else None,
        product_ids=catalog.ids,
    )


def batch_costs(catalog: ProductCatalog, demand: np.ndarray, X, Q, policy_reorder,
                config: SimConfig, mode: Mode = "continuous-review"):
    """Per-candidate, per-replication cost components on a shared demand array.

    ``X`` and ``Q`` are (N, P) starting stocks and order quantities (rounded
    half-up here).  Returns ``(costs (N, R, 4), inventory (N, R))``.
    """
    policy = PolicyParams(policy_reorder, np.zeros(len(catalog)), mode=mode)
    args = _kernel_args(catalog, policy, config)
    X = round_half_up(np.atleast_2d(X))
    Q = round_half_up(np.atleast_2d(Q))
    costs, inv, _, _ = _kernel.run_batch(
        demand, X, args["reorder"], Q, args["lead"], args["pc"], args["oc"], args["hc"],
        args["cost_model"], args["immediate"], args["crossdock"],
    )
    return costs, inv


def summarize(costs: np.ndarray, inventory: np.ndarray, horizon_days: int) -> McsSummary:
    """Aggregate one candidate's (R, 4) costs and (R,) inventory totals."""
    n = costs.shape[0]
    totals = costs.sum(axis=1)
    grand = float(totals.sum())
    periods = n * horizon_days
    return McsSummary(
        mean_cost=grand / n,
        average_cost=grand / periods if periods else 0.0,
        average_inventory_level=float(inventory.sum()) / periods if periods else 0.0,
        replication_costs=totals,
        mean_breakdown=CostBreakdown.from_array(costs.sum(axis=0) / n),
        num_simulations=n,
        horizon_days=horizon_days,
    )


def run_mcs(catalog: ProductCatalog, x, policy: PolicyParams, config: SimConfig) -> McsSummary:
    """Monte Carlo estimate over ``config.num_simulations`` replications.

    Replication ``k`` always sees the demand keyed by ``(config.seed, k)``.
    """
    x = _check_vector(x, catalog, "x")
    demand = demand_matrix(catalog, config.seed, config.num_simulations, config.horizon_days)
    costs, inv = batch_costs(catalog, demand, x[None, :], np.asarray(policy.order_quantities)[None, :],
                             policy.reorder_levels, config, policy.mode)
    return summarize(costs[0], inv[0], config.horizon_days)


def profit_report(result: SimResult, catalog: ProductCatalog, h_annual: float = 20.0) -> float:
    """Annual profit from a traced replication.

    Revenue minus annualized holding (``h_annual * V / 365`` per unit-day),
    order costs and purchase costs, summed over products.
    """
    if result.trace is None:
        raise ValueError("profit_report needs a result simulated with trace=True")
    tr = result.trace
    sold = tr[:, :, 3].sum(axis=0)
    inventory = tr[:, :, 0].sum(axis=0)
    purchased = tr[:, :, 4].sum(axis=0)
    sp = catalog.column("selling_price")
    v = catalog.column("holding_cost")
    c = catalog.column("order_cost")
    pc = catalog.column("purchase_cost")
    profit = sp * sold - ((h_annual * v / 365.0) * inventory + result.orders_placed * c + pc * purchased)
    return float(profit.sum())
