"""Optimizer suite behind one ``optimize(objective, bounds, cfg)`` entry point."""

from .base import ALGORITHMS, Budget, BudgetError, OptimizerConfig, OptRun
from .baselines import gwo_optimize, random_search, sa_optimize, woa_optimize
from .de import adaptive_de_optimize, crossover_bin, de_optimize, multi_start_de, mutate_best1

_DISPATCH = {
    "de-best1bin": de_optimize,
    "de-adaptive": adaptive_de_optimize,
    "de-multistart": multi_start_de,
    "gwo": gwo_optimize,
    "woa": woa_optimize,
    "sa": sa_optimize,
    "random-search": random_search,
}


def optimize(objective, bounds, cfg: OptimizerConfig) -> OptRun:
    return _DISPATCH[cfg.algorithm](objective, bounds, cfg)


from .compare import ComparisonReport, ComparisonRow, compare  # noqa: E402

__all__ = [
    "ALGORITHMS", "Budget", "BudgetError", "ComparisonReport", "ComparisonRow", "OptRun",
    "OptimizerConfig", "adaptive_de_optimize", "compare", "crossover_bin", "de_optimize",
    "gwo_optimize", "multi_start_de", "mutate_best1", "optimize", "random_search",
    "sa_optimize", "woa_optimize",
]
