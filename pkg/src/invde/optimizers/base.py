from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..objective import Bounds, repair

ALGORITHMS = ("de-best1bin", "de-adaptive", "de-multistart", "gwo", "woa", "sa", "random-search")
DE_ALGORITHMS = ("de-best1bin", "de-adaptive", "de-multistart")


class BudgetError(RuntimeError):
    """The evaluation budget cannot cover the algorithm's first step."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings shared by every optimizer.

    ``max_evaluations=None`` means ``population * (generations + 1)``, times
    ``ensemble_size`` for the multi-start ensemble.  An explicit value is
    always the total for the whole run, ensemble included.
    """

    algorithm: str = "de-best1bin"
    population: int = 50
    generations: int = 100
    F: float = 0.7
    CR: float = 0.9
    ensemble_size: int = 5
    seed: int = 0
    max_evaluations: int | None = None
    adapt_prob: float = 0.1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.algorithm in DE_ALGORITHMS and self.population < 4:
            raise ValueError("DE needs population >= 4")
        if self.population < 1 or self.generations < 0:
            raise ValueError("population must be >= 1 and generations >= 0")
        if not 0 < self.F <= 2:
            raise ValueError("F must lie in (0, 2]")
        if not 0 <= self.CR <= 1:
            raise ValueError("CR must lie in [0, 1]")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ValueError("max_evaluations must be > 0")
        if not 0 <= self.adapt_prob <= 1:
            raise ValueError("adapt_prob must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def budget(self) -> int:
        if self.max_evaluations is not None:
            return self.max_evaluations
        per_run = self.population * (self.generations + 1)
        return per_run * (self.ensemble_size if self.algorithm == "de-multistart" else 1)


@dataclass
class OptRun:
    algorithm: str
    best_x: np.ndarray
    best_cost: float
    history: list[float]
    evaluations_used: int
    config: OptimizerConfig
    member_runs: list["OptRun"] = field(default_factory=list)

    def as_dict(self, with_history: bool = True) -> dict:
        out = {
            "algorithm": self.algorithm,
            "best_x": [float(v) for v in self.best_x],
            "best_cost": float(self.best_cost),
            "evaluations_used": int(self.evaluations_used),
            "seed": int(self.config.seed),
        }
        if with_history:
            out["history"] = [float(v) for v in self.history]
        if self.member_runs:
            out["member_runs"] = [m.as_dict(with_history=False) for m in self.member_runs]
        return out


class Budget:
    """Counts evaluations against a hard cap and tracks the best point seen."""

    def __init__(self, objective: Callable, limit: int):
        self.objective = objective
        self.limit = int(limit)
        self.used = 0
        self.best_x: np.ndarray | None = None
        self.best_cost = np.inf
        self._batch = getattr(objective, "evaluate_batch", None)

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if X.shape[0] > self.remaining:
            raise BudgetError(f"{X.shape[0]} evaluations requested, {self.remaining} left")
        if self._batch is not None:
            f = np.asarray(self._batch(X), dtype=np.float64)
        else:
            f = np.array([float(self.objective(x)) for x in X])
        self.used += X.shape[0]
        k = int(np.argmin(f))
        if f[k] < self.best_cost:
            self.best_cost = float(f[k])
            self.best_x = X[k].copy()
        return f


def uniform_population(rng: np.random.Generator, bounds: Bounds, n: int) -> np.ndarray:
    return bounds.lower + rng.random((n, len(bounds))) * bounds.width


def finish(name: str, budget: Budget, history: list[float], cfg: OptimizerConfig) -> OptRun:
    return OptRun(name, budget.best_x, budget.best_cost, history, budget.used, cfg)


__all__ = ["ALGORITHMS", "Budget", "BudgetError", "OptRun", "OptimizerConfig", "repair",
           "uniform_population", "finish"]
