"""Differential evolution: best/1/bin, self-adaptive variant, multi-start ensemble."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..objective import Bounds, repair
from .base import Budget, BudgetError, OptimizerConfig, OptRun, finish, uniform_population

F_RANGE = (0.1, 0.9)


def mutate_best1(best, r1, r2, F):
    """best/1 donor vector(s): ``best + F * (r1 - r2)``.

    Works on single vectors or row-stacked populations; ``F`` may be a scalar
    or one value per row.
    """
    best, r1, r2 = (np.asarray(v, dtype=np.float64) for v in (best, r1, r2))
    if not (best.shape[-1] == r1.shape[-1] == r2.shape[-1]):
        raise ValueError("best, r1 and r2 must have the same length")
    F = np.asarray(F, dtype=np.float64)
    if F.ndim:
        F = F[..., None]
    return best + F * (r1 - r2)


def crossover_bin(target, mutant, CR, rng: np.random.Generator):
    """Binomial crossover.

    Each coordinate comes from ``mutant`` with probability ``CR``; one
    uniformly chosen coordinate per vector always does.
    """
    target = np.asarray(target, dtype=np.float64)
    mutant = np.asarray(mutant, dtype=np.float64)
    if target.shape != mutant.shape:
        raise ValueError("target and mutant shapes differ")
    lead_shape, dim = target.shape[:-1], target.shape[-1]
    CR = np.asarray(CR, dtype=np.float64)
    if CR.ndim:
        CR = CR[..., None]
    take = rng.random(target.shape) < CR
    forced = rng.integers(dim, size=lead_shape)
    np.put_along_axis(take, np.asarray(forced)[..., None], True, axis=-1)
    return np.where(take, mutant, target)


def _pick_donors(rng: np.random.Generator, n: int, best: int):
    # two distinct indices per row, both different from the row and from best
    keys = rng.random((n, n))
    keys[np.arange(n), np.arange(n)] = np.inf
    keys[:, best] = np.inf
    order = np.argpartition(keys, 1, axis=1)[:, :2]
    return order[:, 0], order[:, 1]


def _de(objective, bounds: Bounds, cfg: OptimizerConfig, adapt_prob: float, name: str) -> OptRun:
    NP = cfg.population
    budget = Budget(objective, cfg.budget)
    if budget.limit < 2 * NP:
        raise BudgetError(f"budget {budget.limit} cannot cover initialization plus one generation ({2 * NP})")
    rng = np.random.default_rng(cfg.seed)
    # adaptation draws come from their own stream so that adapt_prob=0
    # reproduces plain DE exactly
    adapt_rng = np.random.default_rng([cfg.seed, 1])

    pop = uniform_population(rng, bounds, NP)
    fit = budget.evaluate(pop)
    F = np.full(NP, cfg.F)
    CR = np.full(NP, cfg.CR)
    history = [budget.best_cost]

    for _ in range(cfg.generations):
        n = min(NP, budget.remaining)
        if n == 0:
            break
        best = int(np.argmin(fit))
        if adapt_prob > 0:
            F_try = np.where(adapt_rng.random(NP) < adapt_prob, adapt_rng.uniform(*F_RANGE, NP), F)
            CR_try = np.where(adapt_rng.random(NP) < adapt_prob, adapt_rng.random(NP), CR)
        else:
            F_try, CR_try = F, CR
        r1, r2 = _pick_donors(rng, NP, best)
        mutant = mutate_best1(pop[best], pop[r1], pop[r2], F_try)
        trial = repair(crossover_bin(pop, mutant, CR_try, rng), bounds)

        f_trial = budget.evaluate(trial[:n])
        won = f_trial <= fit[:n]
        idx = np.flatnonzero(won)
        pop[idx] = trial[idx]
        fit[idx] = f_trial[idx]
        F[idx] = F_try[idx]
        CR[idx] = CR_try[idx]
        history.append(budget.best_cost)

    return finish(name, budget, history, cfg)


def de_optimize(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Classic DE/best/1/bin with greedy (ties accepted) one-to-one selection.

    Trials are generated for the whole population, then evaluated as one
    batch.  If the budget runs out mid-generation only the leading trials
    are evaluated.
    """
    return _de(objective, bounds, cfg, 0.0, "de-best1bin")


def adaptive_de_optimize(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """best/1/bin with per-individual self-adapting F and CR.

    With probability ``cfg.adapt_prob`` an individual tries a fresh F in
    [0.1, 0.9] (and, independently, a fresh CR in [0, 1]); the new values
    survive only if its trial wins selection.
    """
    return _de(objective, bounds, cfg, cfg.adapt_prob, "de-adaptive")


def multi_start_de(objective, bounds: Bounds, cfg: OptimizerConfig) -> OptRun:
    """Independent adaptive-DE runs from seeds ``seed, seed+1, ...``; keep the best.

    The total budget is split evenly between members.
    """
    k = cfg.ensemble_size
    per_member = cfg.budget // k
    members = []
    for j in range(k):
        member_cfg = replace(cfg, algorithm="de-adaptive", seed=(cfg.seed + j) % 2**64,
                             max_evaluations=per_member)
        members.append(adaptive_de_optimize(objective, bounds, member_cfg))

    length = max(len(m.history) for m in members)
    padded = np.array([m.history + [m.history[-1]] * (length - len(m.history)) for m in members])
    history = [float(v) for v in padded.min(axis=0)]
    winner = min(range(k), key=lambda j: (members[j].best_cost, j))
    return OptRun(
        algorithm="de-multistart",
        best_x=members[winner].best_x.copy(),
        best_cost=members[winner].best_cost,
        history=history,
        evaluations_used=sum(m.evaluations_used for m in members),
        config=cfg,
        member_runs=members,
    )
