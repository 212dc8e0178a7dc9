"""ABC classification, Latin-hypercube calibration, population-size sensitivity."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .catalog import ProductCatalog
from .objective import OPTIMIZATION_SAMPLES, SCORING_SAMPLES
from .optimizers import OptimizerConfig, OptRun
from .optimizers.compare import median_run, run_rescored
from .simulator import Mode, PolicyParams, SimConfig, round_half_up, run_mcs

# --------------------------------------------------------------------------- ABC


@dataclass
class AbcRow:
    product_id: str
    cv_annual: float
    share: float
    cumulative_share: float
    category: str


@dataclass
class AbcReport:
    rows: list[AbcRow]  # descending consumption value
    total_cv: float
    cutoff_a: float
    cutoff_b: float

    def by_id(self) -> dict[str, AbcRow]:
        return {r.product_id: r for r in self.rows}

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["product_id", "cv_annual", "share", "cumulative_share", "category"])
            for r in self.rows:
                w.writerow([r.product_id, repr(r.cv_annual), repr(r.share), repr(r.cumulative_share), r.category])


def abc_analysis(catalog: ProductCatalog, cutoff_a: float = 0.8, cutoff_b: float = 0.95) -> AbcReport:
    """Pareto classification by annual consumption value ``demand_lead * selling_price``.

    Products are ranked by value; a product is A while the running share is
    within ``cutoff_a``, B while within ``cutoff_b``, otherwise C.  The top
    product is always A.
    """
    if not 0 < cutoff_a < cutoff_b <= 1:
        raise ValueError("need 0 < cutoff_a < cutoff_b <= 1")
    cv = catalog.column("demand_lead") * catalog.column("selling_price")
    total = float(cv.sum())
    if total <= 0:
        raise ValueError("total consumption value is zero")
    order = np.argsort(-cv, kind="stable")
    share = cv / total
    rows = []
    cumulative = 0.0
    eps = 1e-12
    for rank, i in enumerate(order):
        cumulative += share[i]
        if rank == 0 or cumulative <= cutoff_a + eps:
            cat = "A"
        elif cumulative <= cutoff_b + eps:
            cat = "B"
        else:
            cat = "C"
        rows.append(AbcRow(catalog[i].id, float(cv[i]), float(share[i]), float(cumulative), cat))
    return AbcReport(rows, total, cutoff_a, cutoff_b)


# --------------------------------------------------------------------------- LHS


@dataclass
class LhsDesign:
    factors: list[tuple[str, tuple]]
    rows: np.ndarray  # (n_rows, n_factors) level indices
    seed: int

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    def level_counts(self) -> dict[str, list[int]]:
        return {
            name: [int(np.sum(self.rows[:, j] == k)) for k in range(len(levels))]
            for j, (name, levels) in enumerate(self.factors)
        }

    def values(self) -> list[dict]:
        return [
            {name: levels[idx] for (name, levels), idx in zip(self.factors, row)}
            for row in self.rows
        ]


def _duplicates(rows: np.ndarray) -> list[int]:
    seen = set()
    dup = []
    for i, row in enumerate(map(tuple, rows)):
        if row in seen:
            dup.append(i)
        seen.add(row)
    return dup


def lhs_design(factors: Sequence[tuple[str, Sequence]], n_rows: int, seed: int = 0,
               strict: bool = True, max_restarts: int = 50, max_swaps: int = 2000) -> LhsDesign:
    """Balanced stratified design with unique rows.

    Every factor column holds each level ``n_rows / n_levels`` times in a
    seeded random order.  With ``strict=False`` a level count that does not
    divide ``n_rows`` is allowed and counts differ by at most one.  Duplicate
    rows are removed by swapping entries within a column, which keeps the
    balance; after ``max_swaps`` fruitless swaps the columns are redrawn.
    """
    factors = [(str(name), tuple(levels)) for name, levels in factors]
    if not factors:
        raise ValueError("need at least one factor")
    if n_rows < 1:
        raise ValueError("n_rows must be >= 1")
    for name, levels in factors:
        if not levels:
            raise ValueError(f"factor {name!r} has no levels")
        if strict and n_rows % len(levels):
            raise ValueError(f"balance impossible: {n_rows} rows for {len(levels)} levels of {name!r}")
    if n_rows > np.prod([len(lv) for _, lv in factors], dtype=float):
        raise ValueError("more rows requested than distinct level combinations")

    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        cols = []
        for _, levels in factors:
            k = len(levels)
            col = np.tile(np.arange(k), -(-n_rows // k))[:n_rows]
            cols.append(rng.permutation(col))
        D = np.column_stack(cols)
        dup = _duplicates(D)
        for _ in range(max_swaps):
            if not dup:
                break
            j = dup[rng.integers(len(dup))]
            c = rng.integers(D.shape[1])
            m = rng.integers(n_rows)
            D[[j, m], c] = D[[m, j], c]
            new_dup = _duplicates(D)
            if len(new_dup) > len(dup):
                D[[j, m], c] = D[[m, j], c]
            else:
                dup = new_dup
        if not dup:
            return LhsDesign(factors, D, seed)
    raise RuntimeError("could not find a design with unique rows; retry limit exceeded")


# --------------------------------------------------------------------------- calibration


@dataclass(frozen=True)
class CalibrationSpace:
    """Multiplier grids for calibration rows.

    ``reorder`` and ``order_qty`` scale the lead-time demand ``mu * L``;
    ``lead`` scales the lead time; ``safety`` is the safety stock as a
    fraction of the reorder point.  Repeated levels are dropped.
    """

    reorder: tuple[float, ...] = (0.8, 1.0, 1.2)
    safety: tuple[float, ...] = (0.5, 1.0, 0.5)
    lead: tuple[float, ...] = (0.8, 1.0, 1.2)
    order_qty: tuple[float, ...] = (0.8, 1.0, 1.2)
    n_rows: int = 27
    seed: int = 0

    def factors(self) -> list[tuple[str, tuple]]:
        return [
            (name, tuple(dict.fromkeys(float(v) for v in getattr(self, name))))
            for name in ("reorder", "safety", "lead", "order_qty")
        ]


@dataclass
class CalibrationRow:
    multipliers: dict
    lead_times: np.ndarray
    reorder_points: np.ndarray
    safety_stocks: np.ndarray
    order_quantities: np.ndarray
    average_cost: float
    mean_cost: float
    average_inventory_level: float


@dataclass
class CalibrationReport:
    rows: list[CalibrationRow]
    best_index: int
    product_ids: list[str]
    level_counts: dict = field(default_factory=dict)

    @property
    def best(self) -> CalibrationRow:
        return self.rows[self.best_index]

    def write_csv(self, path: str | Path) -> None:
        ids = self.product_ids
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row", *(f"reorder_{p}" for p in ids), *(f"safety_{p}" for p in ids),
                        "reorder_mult", "safety_frac", "lead_time", "order_qty", "average_cost", "best"])
            for k, r in enumerate(self.rows):
                m = r.multipliers
                w.writerow([k, *(int(v) for v in round_half_up(r.reorder_points)),
                            *(int(v) for v in round_half_up(r.safety_stocks)),
                            m["reorder"], m["safety"], m["lead"], m["order_qty"],
                            repr(r.average_cost), int(k == self.best_index)])


def calibration_policy(catalog: ProductCatalog, multipliers: dict):
    """Catalog and policy for one calibration row.

    Lead time ``L' = max(1, round(lead * L))`` and ``base = mu * L'``.  The
    reorder point is ``reorder * base`` and the safety stock ``safety`` times
    the reorder point; orders trigger when the inventory position drops below
    their sum.  The order lot is ``order_qty * base``.  An optional
    ``order_cost`` multiplier scales the per-order charge.
    """
    lead = np.maximum(1, round_half_up(multipliers["lead"] * catalog.column("lead_time")))
    cat = catalog.replace_column("lead_time", lead)
    if multipliers.get("order_cost", 1.0) != 1.0:
        cat = cat.replace_column("order_cost", catalog.column("order_cost") * multipliers["order_cost"])
    base = catalog.column("demand_mean") * lead
    reorder = multipliers["reorder"] * base
    safety = multipliers["safety"] * reorder
    qty = multipliers["order_qty"] * base
    return cat, reorder, safety, qty


def calibrate_rows(catalog: ProductCatalog, rows: Sequence[dict], config: SimConfig,
                   mode: Mode = "continuous-review") -> CalibrationReport:
    """Simulate each multiplier row from the catalog starting stocks."""
    x = catalog.column("starting_stock")
    out = []
    for m in rows:
        cat, reorder, safety, qty = calibration_policy(catalog, m)
        policy = PolicyParams(tuple(reorder + safety), tuple(qty), tuple(safety), mode)
        s = run_mcs(cat, x, policy, config)
        out.append(CalibrationRow(dict(m), cat.column("lead_time"), reorder, safety, qty,
                                  s.average_cost, s.mean_cost, s.average_inventory_level))
    costs = [r.average_cost for r in out]
    best = int(np.argmin(costs))  # first minimum on ties
    return CalibrationReport(out, best, catalog.ids)


def calibrate(catalog: ProductCatalog, space: CalibrationSpace | None = None,
              config: SimConfig | None = None, mode: Mode = "continuous-review") -> CalibrationReport:
    """Simulate every row of an LHS design over the space; mark the cheapest."""
    space = space or CalibrationSpace()
    config = config or SimConfig(num_simulations=OPTIMIZATION_SAMPLES)
    design = lhs_design(space.factors(), space.n_rows, space.seed, strict=False)
    report = calibrate_rows(catalog, design.values(), config, mode)
    report.level_counts = design.level_counts()
    return report


# --------------------------------------------------------------------------- sensitivity


@dataclass
class SensitivityRow:
    population: int
    stocks: np.ndarray
    total_cost: float
    seed_costs: list[float]
    runs: list[OptRun]


@dataclass
class SensitivityReport:
    rows: list[SensitivityRow]
    product_ids: list[str]

    @property
    def spread(self) -> float:
        costs = [r.total_cost for r in self.rows]
        return (max(costs) - min(costs)) / min(costs)

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["population", *(f"stock_{p}" for p in self.product_ids), "total_cost"])
            for r in self.rows:
                w.writerow([r.population, *(int(v) for v in round_half_up(r.stocks)), repr(r.total_cost)])


def sensitivity(catalog: ProductCatalog, pop_sizes: Sequence[int] = (10, 20, 50, 100),
                cfg: OptimizerConfig | None = None, seeds: Sequence[int] = (0,),
                config: SimConfig | None = None, scoring_samples: int = SCORING_SAMPLES,
                mode: Mode = "continuous-review") -> SensitivityReport:
    """Multi-start DE per population size on one shared evaluation budget.

    Each size gets ``cfg.budget`` evaluations per seed.  A row holds the
    median re-scored cost over seeds and the stocks of the run attaining it.
    """
    if not pop_sizes:
        raise ValueError("need at least one population size")
    cfg = cfg or OptimizerConfig(algorithm="de-multistart", max_evaluations=20_000)
    config = config or SimConfig(num_simulations=OPTIMIZATION_SAMPLES)
    budget = cfg.budget
    rows = []
    for size in pop_sizes:
        runs, costs = [], []
        for s in seeds:
            run_cfg = replace(cfg, algorithm="de-multistart", population=int(size), seed=s,
                              max_evaluations=budget, generations=budget)
            run, cost = run_rescored(catalog, config, run_cfg, scoring_samples, mode)
            runs.append(run)
            costs.append(cost)
        mid = median_run(costs)
        rows.append(SensitivityRow(int(size), runs[mid].best_x, float(np.median(costs)),
                                   [float(c) for c in costs], runs))
    return SensitivityReport(rows, catalog.ids)

