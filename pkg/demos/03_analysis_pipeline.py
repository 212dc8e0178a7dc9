"""
ABC classification, LHS calibration and an algorithm comparison
================================================================
"""

from invde.analysis import abc_analysis, calibrate
from invde.catalog import builtin_paper_catalog
from invde.optimizers import compare
from invde.simulator import SimConfig

catalog = builtin_paper_catalog()

# %%
# Pareto split on yearly consumption value.
for row in abc_analysis(catalog).rows:
    print(f"{row.product_id}  value {row.cv_annual:9,.0f}  share {row.share:.4f}  class {row.category}")

# %%
# A 27-row Latin hypercube over reorder, safety, lead-time and lot-size
# multipliers.  The cheapest row is the calibrated policy.
report = calibrate(catalog, config=SimConfig(num_simulations=50))
best = report.best
print("level counts", report.level_counts)
print("best multipliers", best.multipliers)
print("reorder points", best.reorder_points.round())
print("safety stocks ", best.safety_stocks.round())

# %%
# Equal-budget comparison (small budget here; the acceptance suite uses 5e4).
rep = compare(catalog, SimConfig(num_simulations=30), budget=2000, seeds=(0, 1, 2), scoring_samples=200)
for row in rep.rows:
    print(f"{row.algorithm:14s} {row.total_cost:,.0f}")
