"""
Simulating a reorder policy
===========================

Walk through one replication of the daily inventory loop, then estimate the
expected cost of the same policy with a Monte Carlo run.
"""

import numpy as np

from invde.catalog import builtin_paper_catalog
from invde.objective import derive_reorder_levels
from invde.simulator import PolicyParams, SimConfig, profit_report, run_mcs, simulate_once

# %%
# The built-in catalog holds four products with normal daily demand.
catalog = builtin_paper_catalog()
for p in catalog:
    print(f"{p.id}: mean {p.demand_mean:7.2f}  sd {p.demand_std:6.2f}  lead {p.lead_time:2d} days")

# %%
# Reorder when the inventory position drops below mu*L + sqrt(L)*sigma and
# order up to that level from zero, starting from the catalog stocks.
r = derive_reorder_levels(catalog)
policy = PolicyParams(tuple(r), tuple(r))
x = catalog.column("starting_stock")
print("reorder levels", np.round(r, 1))

# %%
# One traced year.  The trace has (day, product, column) with on-hand stock,
# on-order units, demand, sales, ordered units, day cost and arrivals.
one = simulate_once(catalog, x, policy, SimConfig(), trace=True)
print("cost breakdown", one.cost)
print("fill rate", np.round(one.units_sold / one.total_demand, 3))
print("day 0..4 on hand of product A", one.trace[:5, 0, 0])
print("annual profit", round(profit_report(one, catalog)))

# %%
# The Monte Carlo estimate averages 1000 independent replications.
summary = run_mcs(catalog, x, policy, SimConfig(num_simulations=1000, seed=0))
print(f"mean annual cost   {summary.mean_cost:,.0f}")
print(f"average daily cost {summary.average_cost:,.0f}")
print(f"replication sd     {summary.replication_costs.std():,.0f}")
