"""
Reproducible demand
===================

Every demand draw is a hash of (seed, replication, product, day), so any
single day can be regenerated without replaying the ones before it.
"""

import numpy as np

from invde.catalog import builtin_paper_catalog
from invde.demand import DemandStream, demand_matrix, histogram, sample_day

catalog = builtin_paper_catalog()
stream = DemandStream.for_product(catalog, 0, replication=3, seed=42)

year = stream.days(np.arange(365))
print("day 200 from the full year:", year[200], " on its own:", sample_day(stream, 200))

# %%
# The (replication, product, day) cube used by the Monte Carlo runner.
cube = demand_matrix(catalog, seed=42, num_replications=100, horizon_days=365)
print("cube shape", cube.shape)
print("sample means", cube.mean(axis=(0, 2)).round(2), "targets", catalog.column("demand_mean"))
print("sample sds  ", cube.std(axis=(0, 2)).round(2), "targets", catalog.column("demand_std"))

# %%
# Text histogram of one simulated year for product A.
for lo, hi, n in histogram(stream, 365, 12):
    print(f"{lo:7.1f} - {hi:7.1f} {'#' * n}")
