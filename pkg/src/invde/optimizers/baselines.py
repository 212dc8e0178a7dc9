"""Comparison baselines: simulated annealing, grey wolf, whale, random search.

All four are textbook forms.  Each spends exactly ``cfg.budget`` evaluations
(fewer only when ``generations`` caps it first) and records the best-so-far
cost once per block of ``cfg.population`` evaluations.
"""

from __future__ import annotations

import math

import numpy as np

from ..objective import Bounds, repair
from .base import Budget, BudgetError, OptimizerConfig, OptRun, finish, uniform_population

SA_ACCEPT0 = 0.8  # target acceptance of early uphill moves
SA_COOLING = 0.95  # temperature ratio per population-sized block
SA_STEP = 0.1  # proposal sd as a fraction of the box width
SA_MIN_STEP = 1e-3


def random_search(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Uniform sampling in the box, keeping the best point."""
    budget = Budget(objective, cfg.budget)
    rng = np.random.default_rng(cfg.seed)
    history = []
    blocks = 0
    while budget.remaining > 0 and blocks <= cfg.generations:
        n = min(cfg.population, budget.remaining)
        budget.evaluate(uniform_population(rng, bounds, n))
        history.append(budget.best_cost)
        blocks += 1
    return finish("random-search", budget, history, cfg)


def sa_optimize(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Single-state annealing with Gaussian proposals and geometric cooling.

    The start temperature is set from a probe of ``population`` random
    neighbours so that the mean uphill move is accepted with probability
    0.8.  The temperature falls by 0.95 every ``population`` evaluations and
    the proposal width shrinks with ``sqrt(T / T0)``.
    """
    budget = Budget(objective, cfg.budget)
    rng = np.random.default_rng(cfg.seed)
    dim = len(bounds)
    block = cfg.population
    max_evals = min(budget.limit, block * (cfg.generations + 1))

    x = uniform_population(rng, bounds, 1)[0]
    fx = float(budget.evaluate(x)[0])
    history = []

    n_probe = min(block, max_evals - budget.used)
    T0 = 1.0
    if n_probe > 0:
        probe = repair(x + rng.normal(0.0, SA_STEP, (n_probe, dim)) * bounds.width, bounds)
        uphill = budget.evaluate(probe) - fx
        uphill = uphill[uphill > 0]
        if uphill.size:
            T0 = float(uphill.mean()) / -math.log(SA_ACCEPT0)
    T = T0

    while budget.used < max_evals:
        scale = max(SA_STEP * math.sqrt(T / T0), SA_MIN_STEP)
        y = repair(x + rng.normal(0.0, scale, dim) * bounds.width, bounds)
        fy = float(budget.evaluate(y)[0])
        delta = fy - fx
        if delta <= 0 or rng.random() < math.exp(-delta / T):
            x, fx = y, fy
        if budget.used % block == 0:
            T *= SA_COOLING
            history.append(budget.best_cost)
    if not history or history[-1] != budget.best_cost:
        history.append(budget.best_cost)
    return finish("sa", budget, history, cfg)


def _pack_iterations(budget: Budget, cfg: OptimizerConfig) -> int:
    if budget.limit < cfg.population:
        raise BudgetError(f"budget {budget.limit} is smaller than the population {cfg.population}")
    return min(cfg.generations, (budget.limit - cfg.population + cfg.population - 1) // cfg.population)


def gwo_optimize(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Grey wolf optimizer.

    Wolves move to the mean of three pulls towards the alpha, beta and delta
    leaders (best three points found so far); the coefficient ``a`` decays
    linearly from 2 to 0 over the run.
    """
    budget = Budget(objective, cfg.budget)
    rng = np.random.default_rng(cfg.seed)
    NP, dim = cfg.population, len(bounds)
    iters = _pack_iterations(budget, cfg)

    X = uniform_population(rng, bounds, NP)
    fit = budget.evaluate(X)
    order = np.argsort(fit, kind="stable")[:3]
    leaders, leader_fit = X[order].copy(), fit[order].copy()
    history = [budget.best_cost]

    for it in range(iters):
        n = min(NP, budget.remaining)
        a = 2.0 - 2.0 * it / iters
        pulls = []
        for k in range(min(3, len(leaders))):
            A = 2.0 * a * rng.random((NP, dim)) - a
            C = 2.0 * rng.random((NP, dim))
            pulls.append(leaders[k] - A * np.abs(C * leaders[k] - X))
        X = repair(np.mean(pulls, axis=0), bounds)
        f_new = budget.evaluate(X[:n])
        fit[:n] = f_new
        pool = np.vstack([leaders, X[:n]])
        pool_fit = np.concatenate([leader_fit, f_new])
        order = np.argsort(pool_fit, kind="stable")[:3]
        leaders, leader_fit = pool[order].copy(), pool_fit[order].copy()
        history.append(budget.best_cost)
    return finish("gwo", budget, history, cfg)


def woa_optimize(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Whale optimization algorithm.

    Each whale either encircles the best whale (|A| < 1), searches towards a
    random whale (|A| >= 1), or follows a logarithmic spiral around the best
    (probability 0.5).  ``a`` decays linearly from 2 to 0; spiral constant b = 1.
    """
    budget = Budget(objective, cfg.budget)
    rng = np.random.default_rng(cfg.seed)
    NP = cfg.population
    iters = _pack_iterations(budget, cfg)
    b = 1.0

    X = uniform_population(rng, bounds, NP)
    budget.evaluate(X)
    history = [budget.best_cost]

    for it in range(iters):
        n = min(NP, budget.remaining)
        a = 2.0 - 2.0 * it / iters
        best = budget.best_x
        A = 2.0 * a * rng.random(NP) - a
        C = 2.0 * rng.random(NP)
        p = rng.random(NP)
        l = rng.uniform(-1.0, 1.0, NP)
        ref = np.where((np.abs(A) < 1)[:, None], best, X[rng.integers(NP, size=NP)])
        shrink = ref - A[:, None] * np.abs(C[:, None] * ref - X)
        spiral = np.abs(best - X) * (np.exp(b * l) * np.cos(2 * np.pi * l))[:, None] + best
        new = np.where((p < 0.5)[:, None], shrink, spiral)
        X = repair(new, bounds)
        budget.evaluate(X[:n])
        history.append(budget.best_cost)
    return finish("woa", budget, history, cfg)
