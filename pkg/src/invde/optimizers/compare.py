"""Equal-budget algorithm comparison on an inventory catalog."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from ..catalog import ProductCatalog
from ..objective import OPTIMIZATION_SAMPLES, SCORING_SAMPLES, InventoryObjective, rescore
from ..simulator import Mode, SimConfig
from . import optimize
from .base import OptimizerConfig, OptRun


@dataclass
class ComparisonRow:
    algorithm: str
    stocks: np.ndarray
    total_cost: float
    evaluations: int
    seed_costs: list[float] = field(default_factory=list)
    runs: list[OptRun] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "stocks": [float(v) for v in self.stocks],
            "total_cost": self.total_cost,
            "evaluations": self.evaluations,
            "seed_costs": self.seed_costs,
            "search_costs": [r.best_cost for r in self.runs],
        }


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow]
    product_ids: list[str]

    def row(self, algorithm: str) -> ComparisonRow:
        for r in self.rows:
            if r.algorithm == algorithm:
                return r
        raise KeyError(algorithm)

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["algorithm", *(f"stock_{pid}" for pid in self.product_ids), "total_cost", "evaluations"])
            for r in self.rows:
                w.writerow([r.algorithm, *(int(np.floor(v + 0.5)) for v in r.stocks),
                            repr(r.total_cost), r.evaluations])


def median_run(costs: Sequence[float]) -> int:
    """Index of the lower-middle element of ``costs`` (stable on ties)."""
    order = np.argsort(np.asarray(costs), kind="stable")
    return int(order[(len(order) - 1) // 2])


def run_rescored(catalog: ProductCatalog, config: SimConfig, opt_cfg: OptimizerConfig,
                 scoring_samples: int, mode: Mode) -> tuple[OptRun, float]:
    """Optimize on ``config`` replications, then score the winner on fresh demand."""
    objective = InventoryObjective(catalog, config, mode)
    run = optimize(objective, objective.bounds, opt_cfg)
    return run, rescore(run.best_x, catalog, config, scoring_samples, mode=mode)


def compare(catalog: ProductCatalog, config: SimConfig | None = None,
            algorithms: Sequence[str] = ("de-best1bin", "random-search", "sa", "gwo", "woa"),
            budget: int = 5000, seeds: Sequence[int] = (0,), population: int = 50,
            scoring_samples: int = SCORING_SAMPLES, mode: Mode = "continuous-review",
            base: OptimizerConfig | None = None) -> ComparisonReport:
    """Run every algorithm once per seed on the same evaluation budget.

    Search uses ``config`` (by default 30 replications); each run's best
    stocks are re-scored on ``scoring_samples`` independent replications.
    A row reports the median re-scored cost over seeds and the stocks of the
    run that attains it.  Rows are sorted by cost.
    """
    if not algorithms:
        raise ValueError("need at least one algorithm")
    config = config or SimConfig(num_simulations=OPTIMIZATION_SAMPLES)
    base = base or OptimizerConfig()
    # budget, not generations, ends every run
    generations = budget
    rows = []
    for algo in algorithms:
        runs, costs = [], []
        for s in seeds:
            cfg = replace(base, algorithm=algo, population=population, seed=s,
                          max_evaluations=budget, generations=generations)
            run, cost = run_rescored(catalog, config, cfg, scoring_samples, mode)
            runs.append(run)
            costs.append(cost)
        mid = median_run(costs)
        rows.append(ComparisonRow(
            algorithm=algo,
            stocks=runs[mid].best_x,
            total_cost=float(np.median(costs)),
            evaluations=int(max(r.evaluations_used for r in runs)),
            seed_costs=[float(c) for c in costs],
            runs=runs,
        ))
    rows.sort(key=lambda r: r.total_cost)
    return ComparisonReport(rows, catalog.ids)
