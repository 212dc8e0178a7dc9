import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from invde.analysis import lhs_design
from invde.catalog import ProductCatalog
from invde.demand import DemandStream, demand_matrix
from invde.objective import Bounds, derive_order_quantities, repair
from invde.optimizers import OptimizerConfig, crossover_bin, optimize
from invde.simulator import PolicyParams, SimConfig, run_mcs, simulate_once

from helpers import Batched, product, sphere

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small = st.floats(0, 200, allow_nan=False)


@st.composite
def scenarios(draw):
    n = draw(st.integers(1, 3))
    prods = tuple(
        product(f"P{k}", demand_mean=draw(small), demand_std=draw(st.floats(0, 60)),
                lead_time=draw(st.integers(1, 6)), purchase_cost=draw(st.floats(0, 50)),
                order_cost=draw(st.floats(0, 2000)), holding_cost=draw(st.floats(0, 30)))
        for k in range(n)
    )
    cat = ProductCatalog(prods)
    x = draw(st.lists(st.floats(0, 2000), min_size=n, max_size=n))
    r = draw(st.lists(st.floats(0, 1500), min_size=n, max_size=n))
    q = draw(st.lists(st.floats(0, 1500), min_size=n, max_size=n))
    mode = draw(st.sampled_from(["continuous-review", "cross-dock"]))
    cfg = SimConfig(horizon_days=draw(st.integers(0, 40)), num_simulations=draw(st.integers(1, 4)),
                    seed=draw(st.integers(0, 2**64 - 1)),
                    cost_model=draw(st.sampled_from(["breakdown", "paper-loop"])),
                    arrival_model=draw(st.sampled_from(["pipeline", "immediate"])))
    return cat, np.array(x), PolicyParams(tuple(r), tuple(q), mode=mode), cfg


@SETTINGS
@given(scenarios())
def test_components_sum_to_total(s):
    cat, x, pol, cfg = s
    res = simulate_once(cat, x, pol, cfg, trace=True)
    c = res.cost
    assert c.total == c.purchase + c.order + c.holding + c.stockout
    assert min(c.purchase, c.order, c.holding, c.stockout) >= 0
    assert np.isclose(res.trace[:, :, 5].sum(), c.total, rtol=1e-9, atol=1e-6)


@SETTINGS
@given(scenarios())
def test_average_cost_identity(s):
    cat, x, pol, cfg = s
    m = run_mcs(cat, x, pol, cfg)
    total = m.replication_costs.sum()
    assert np.isclose(m.average_cost * cfg.num_simulations * cfg.horizon_days, total, rtol=1e-12, atol=1e-9)
    assert np.isclose(m.mean_breakdown.total, m.mean_cost, rtol=1e-12, atol=1e-9)
    singles = [simulate_once(cat, x, pol, cfg, k).cost.total for k in range(cfg.num_simulations)]
    np.testing.assert_allclose(m.replication_costs, singles, rtol=1e-12, atol=1e-9)


@SETTINGS
@given(scenarios())
def test_unit_conservation(s):
    cat, x, pol, cfg = s
    res = simulate_once(cat, x, pol, cfg, trace=True)
    tr = res.trace
    sold, demand = tr[:, :, 3].sum(axis=0), tr[:, :, 2].sum(axis=0)
    assert np.all(sold <= demand)
    np.testing.assert_array_equal(demand, res.total_demand)
    np.testing.assert_array_equal(res.units_sold, sold)
    assert np.all(tr[:, :, 0] >= 0)
    if cfg.cost_model == "breakdown" and cfg.horizon_days:
        # stock balance: start + arrivals - sold = end
        start = np.floor(x + 0.5)
        arrived = tr[:, :, 6].sum(axis=0)
        np.testing.assert_array_equal(start + arrived - sold, tr[-1, :, 0])
    assert np.all(res.units_crossdocked <= res.units_sold)


@SETTINGS
@given(st.integers(0, 2**64 - 1), st.integers(0, 50), st.integers(0, 3), st.integers(0, 10**6),
       st.floats(0, 1e4), st.floats(0, 1e3))
def test_demand_pure_function(seed, rep, prod, day, mu, sd):
    s = DemandStream(prod, rep, seed, mu, sd)
    a = s.days(np.array([day, day + 1, day]))
    assert a[0] == a[2] >= 0
    assert s.days(day + 1)[0] == a[1]


@SETTINGS
@given(st.integers(0, 2**32), st.integers(1, 5), st.integers(1, 20))
def test_demand_matrix_prefix_stable(seed, reps, days):
    cat = ProductCatalog((product("A", demand_mean=50, demand_std=20), product("B", demand_mean=5, demand_std=3)))
    big = demand_matrix(cat, seed, reps + 2, days + 5)
    np.testing.assert_array_equal(demand_matrix(cat, seed, reps, days), big[:reps, :, :days])


vectors = st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=6)


@SETTINGS
@given(vectors, st.floats(0, 100), st.floats(0, 1e4))
def test_repair_idempotent_in_bounds(v, lo, width):
    b = Bounds(np.full(len(v), lo), np.full(len(v), lo + width))
    x = repair(v, b)
    assert np.all(x >= b.lower) and np.all(x <= b.upper)
    np.testing.assert_array_equal(repair(x, b), x)


@SETTINGS
@given(vectors, vectors)
def test_order_quantities_nonnegative(r, x):
    n = min(len(r), len(x))
    q = derive_order_quantities(np.abs(r[:n]), np.abs(x[:n]))
    assert np.all(q >= 0)
    assert np.all((q == 0) | np.isclose(q + np.abs(x[:n]), np.abs(r[:n])))


@SETTINGS
@given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 2**32))
def test_crossover_takes_mutant_somewhere(dim, cr, seed):
    rng = np.random.default_rng(seed)
    t, m = np.zeros(dim), np.ones(dim)
    trial = crossover_bin(t, m, cr, rng)
    assert trial.sum() >= 1
    assert set(np.unique(trial)) <= {0.0, 1.0}


@SETTINGS
@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.integers(0, 1000), st.data())
def test_lhs_balance_property(levels, seed, data):
    total = int(np.prod(levels))
    k = int(np.lcm.reduce(levels))
    mult = data.draw(st.integers(1, max(1, total // k)))
    n = k * mult
    if n > total:
        return
    d = lhs_design([(f"f{i}", tuple(range(L))) for i, L in enumerate(levels)], n, seed)
    for (name, lv) in d.factors:
        assert d.level_counts()[name] == [n // len(lv)] * len(lv)
    assert len({tuple(r) for r in d.rows}) == n


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["de-best1bin", "de-adaptive", "de-multistart", "sa", "gwo", "woa", "random-search"]),
       st.integers(0, 2**32), st.integers(1, 4), st.integers(40, 400))
def test_optimizer_budget_and_history(algo, seed, dim, budget):
    f = Batched(sphere)
    cfg = OptimizerConfig(algo, population=8, generations=10**4, seed=seed, ensemble_size=2,
                          max_evaluations=budget)
    run = optimize(f, Bounds.box(-2, 2, dim), cfg)
    assert run.evaluations_used == f.calls <= budget
    assert np.all(np.diff(run.history) <= 0)
    assert run.best_cost == min(run.history)
    assert np.isclose(sphere(run.best_x)[0], run.best_cost)
