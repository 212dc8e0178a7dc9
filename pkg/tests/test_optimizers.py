import numpy as np
import pytest

from invde.objective import Bounds, InventoryObjective
from invde.optimizers import (ALGORITHMS, Budget, BudgetError, OptimizerConfig, adaptive_de_optimize, compare,
                              crossover_bin, de_optimize, multi_start_de, mutate_best1, optimize)
from invde.optimizers.compare import median_run
from invde.simulator import SimConfig

from helpers import Batched, sphere

BASELINES = ("random-search", "sa", "gwo", "woa")


def shifted(X):
    return ((np.atleast_2d(X) - 3.0) ** 2).sum(axis=1)


def test_mutation_arithmetic():
    np.testing.assert_array_equal(mutate_best1([0.0], [2.0], [0.0], 0.5), [1.0])
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(mutate_best1(b, [5.0, 5.0, 5.0], [1.0, 1.0, 1.0], 0.0), b)
    np.testing.assert_array_equal(mutate_best1(b, [4.0, 2.0, 0.0], [4.0, 2.0, 0.0], 1.3), b)
    with pytest.raises(ValueError):
        mutate_best1([0.0], [1.0, 2.0], [0.0], 0.5)


def test_crossover_rules():
    rng = np.random.default_rng(0)
    t, m = np.zeros(6), np.ones(6)
    np.testing.assert_array_equal(crossover_bin(t, m, 1.0, rng), m)
    for _ in range(20):
        assert crossover_bin(t, m, 0.0, rng).sum() == 1
    np.testing.assert_array_equal(crossover_bin(np.zeros(1), np.ones(1), 0.0, rng), [1.0])
    # batched rows each get their own forced index
    trial = crossover_bin(np.zeros((50, 6)), np.ones((50, 6)), 0.0, rng)
    np.testing.assert_array_equal(trial.sum(axis=1), 1)


@pytest.mark.parametrize("fn", [de_optimize, adaptive_de_optimize])
def test_de_sphere(fn):
    f = Batched(sphere)
    run = fn(f, Bounds.box(-5, 5, 5), OptimizerConfig(population=50, generations=200, seed=1))
    assert run.best_cost < 1e-6
    assert run.evaluations_used == f.calls == 50 * 201
    assert np.all(np.diff(run.history) <= 0)
    assert len(run.history) == 201


def test_de_shifted_parabola():
    run = de_optimize(Batched(shifted), Bounds.box(0, 10, 1), OptimizerConfig(population=20, generations=100))
    assert abs(run.best_x[0] - 3) < 1e-3


def test_de_constant_objective():
    run = de_optimize(Batched(lambda X: np.full(len(X), 7.0)), Bounds.box(0, 1, 3),
                      OptimizerConfig(population=10, generations=5))
    assert run.best_cost == 7.0
    assert set(run.history) == {7.0}


def test_de_accepts_plain_callable():
    run = de_optimize(lambda x: float(np.sum(x ** 2)), Bounds.box(-1, 1, 2),
                      OptimizerConfig(population=8, generations=10))
    assert run.evaluations_used == 88


def test_de_budget_too_small():
    with pytest.raises(BudgetError):
        de_optimize(Batched(sphere), Bounds.box(-1, 1, 2), OptimizerConfig(population=10, max_evaluations=15))


def test_de_partial_last_generation():
    f = Batched(sphere)
    run = de_optimize(f, Bounds.box(-1, 1, 2), OptimizerConfig(population=10, generations=100, max_evaluations=35))
    assert run.evaluations_used == f.calls == 35


def test_adaptive_reduces_to_plain():
    cfg = OptimizerConfig(population=20, generations=30, seed=9, adapt_prob=0.0)
    a = de_optimize(Batched(sphere), Bounds.box(-5, 5, 4), cfg)
    b = adaptive_de_optimize(Batched(sphere), Bounds.box(-5, 5, 4), cfg)
    np.testing.assert_array_equal(a.best_x, b.best_x)
    assert a.history == b.history


def test_multistart_single_member_is_adaptive():
    cfg = OptimizerConfig("de-multistart", population=20, generations=20, seed=4, ensemble_size=1)
    ens = multi_start_de(Batched(sphere), Bounds.box(-5, 5, 3), cfg)
    one = adaptive_de_optimize(Batched(sphere), Bounds.box(-5, 5, 3), cfg)
    np.testing.assert_array_equal(ens.best_x, one.best_x)
    assert ens.best_cost == one.best_cost


@pytest.mark.parametrize("seed", range(5))
def test_multistart_dominates_members(seed):
    f = Batched(lambda X: sphere(X) + 10 * np.sin(3 * X).sum(axis=1))
    cfg = OptimizerConfig("de-multistart", population=10, generations=20, seed=seed, ensemble_size=4)
    run = multi_start_de(f, Bounds.box(-5, 5, 4), cfg)
    assert len(run.member_runs) == 4
    assert run.best_cost <= min(m.best_cost for m in run.member_runs)
    assert run.evaluations_used == f.calls == cfg.budget
    assert [m.config.seed for m in run.member_runs] == [seed + k for k in range(4)]


def test_multistart_splits_explicit_budget():
    f = Batched(sphere)
    run = multi_start_de(f, Bounds.box(-5, 5, 3),
                         OptimizerConfig("de-multistart", population=10, ensemble_size=5, max_evaluations=1000))
    assert f.calls == run.evaluations_used <= 1000
    assert all(m.evaluations_used == 200 for m in run.member_runs)


@pytest.mark.parametrize("algo", BASELINES)
def test_baselines_constant(algo):
    run = optimize(Batched(lambda X: np.full(len(X), 3.5)), Bounds.box(0, 1, 2),
                   OptimizerConfig(algo, population=10, generations=5))
    assert run.best_cost == 3.5


@pytest.mark.parametrize("algo", BASELINES)
def test_baselines_shifted_parabola(algo):
    f = Batched(shifted)
    run = optimize(f, Bounds.box(0, 10, 1),
                   OptimizerConfig(algo, population=50, generations=10**4, max_evaluations=10**4, seed=2))
    assert run.best_cost < 1e-2
    assert run.evaluations_used == f.calls == 10**4
    assert np.all(np.diff(run.history) <= 0)


def test_random_search_single_point():
    seen = []

    def f(x):
        seen.append(np.array(x))
        return float(x[0])

    run = optimize(f, Bounds.box(0, 1, 2), OptimizerConfig("random-search", population=10, max_evaluations=1))
    assert run.evaluations_used == 1
    np.testing.assert_array_equal(run.best_x, seen[0])


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_seed_determinism(algo):
    cfg = OptimizerConfig(algo, population=8, generations=6, seed=123, ensemble_size=2)
    a = optimize(Batched(sphere), Bounds.box(-3, 3, 3), cfg)
    b = optimize(Batched(sphere), Bounds.box(-3, 3, 3), cfg)
    np.testing.assert_array_equal(a.best_x, b.best_x)
    assert a.history == b.history


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_points_stay_in_bounds(algo):
    b = Bounds.box(-1, 2, 3)
    seen = []

    def f(X):
        seen.append(np.atleast_2d(X).copy())
        return sphere(X - 5)

    optimize(Batched(f), b, OptimizerConfig(algo, population=8, generations=10, ensemble_size=2))
    pts = np.vstack(seen)
    assert pts.min() >= -1 and pts.max() <= 2


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig("pso")
    with pytest.raises(ValueError):
        OptimizerConfig(population=3)
    with pytest.raises(ValueError):
        OptimizerConfig(CR=1.5)
    with pytest.raises(ValueError):
        OptimizerConfig(seed=-1)
    assert OptimizerConfig(population=10, generations=9).budget == 100
    assert OptimizerConfig("de-multistart", population=10, generations=9, ensemble_size=3).budget == 300


def test_budget_guard():
    b = Budget(lambda x: 0.0, 2)
    b.evaluate(np.zeros((2, 1)))
    with pytest.raises(BudgetError):
        b.evaluate(np.zeros((1, 1)))


def test_median_run():
    assert median_run([5.0, 1.0, 3.0]) == 2
    assert median_run([4.0, 1.0, 3.0, 2.0]) == 3


def test_compare_single(builtin):
    cfg = SimConfig(horizon_days=60, num_simulations=3)
    rep = compare(builtin, cfg, ["de-best1bin"], budget=100, population=10, scoring_samples=5)
    row = rep.row("de-best1bin")
    assert len(rep.rows) == 1 and row.evaluations == 100
    f = InventoryObjective(builtin, cfg)
    run = optimize(f, f.bounds, OptimizerConfig(population=10, generations=100, max_evaluations=100))
    np.testing.assert_array_equal(row.stocks, run.best_x)
    with pytest.raises(KeyError):
        rep.row("sa")


def test_compare_rows_in_bounds_and_sorted(builtin, tmp_path):
    cfg = SimConfig(horizon_days=30, num_simulations=2)
    rep = compare(builtin, cfg, ["de-best1bin", *BASELINES], budget=60, seeds=(0, 1), population=10,
                  scoring_samples=3)
    ub = builtin.column("starting_stock")
    for r in rep.rows:
        assert np.all(r.stocks >= 0) and np.all(r.stocks <= ub)
        assert len(r.seed_costs) == 2
    costs = [r.total_cost for r in rep.rows]
    assert costs == sorted(costs)
    rep.write_csv(tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "algorithm,stock_A,stock_B,stock_C,stock_D,total_cost,evaluations"
    assert len(lines) == 6
