"""Reproducible daily demand.

Every sample is a pure function of ``(seed, replication, product, day)``.
The key is hashed with the SplitMix64 finalizer into two 53-bit uniforms,
which a Box-Muller transform turns into one standard normal.  Demand is
``floor(max(mu + sigma * z, 0) + 0.5)`` -- clamped at zero, rounded half-up.

Because no generator state is carried between draws, samples are the same
regardless of call order, batching or thread schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import ProductCatalog

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SALT = np.uint64(0xD1B54A32D192ED03)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _u64(v) -> np.ndarray:
    a = np.asarray(v)
    if a.dtype.kind in "iu" and a.size and (a < 0).any():
        raise ValueError("keys must be non-negative")
    return a.astype(np.uint64)


def _key(seed, replication, product, day) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = _mix(np.atleast_1d(_u64(seed)) ^ _SALT)
        h = _mix(h + (_u64(replication) + np.uint64(1)) * _GOLDEN)
        h = _mix(h + (_u64(product) + np.uint64(1)) * _GOLDEN)
        return _mix(h + (_u64(day) + np.uint64(1)) * _GOLDEN)


def standard_normal(seed, replication, product, day) -> np.ndarray:
    """Standard normal deviates keyed by broadcastable integer arrays."""
    h = _key(seed, replication, product, day)
    with np.errstate(over="ignore"):
        b1 = _mix(h + _GOLDEN) >> np.uint64(11)
        b2 = _mix(h + np.uint64(2) * _GOLDEN) >> np.uint64(11)
    u1 = (b1.astype(np.float64) + 1.0) * _INV53  # (0, 1]
    u2 = b2.astype(np.float64) * _INV53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def to_units(mean, std, z) -> np.ndarray:
    return np.floor(np.maximum(mean + std * z, 0.0) + 0.5).astype(np.int64)


@dataclass(frozen=True)
class DemandStream:
    """Demand for one product in one replication."""

    product_index: int
    replication: int
    seed: int
    mean: float
    std: float

    @classmethod
    def for_product(cls, catalog: ProductCatalog, product_index: int, replication: int = 0,
                    seed: int = 0) -> "DemandStream":
        p = catalog[product_index]
        return cls(product_index, replication, seed, p.demand_mean, p.demand_std)

    def days(self, days) -> np.ndarray:
        d = np.asarray(days)
        if d.size and (d < 0).any():
            raise ValueError("day must be >= 0")
        z = standard_normal(self.seed, self.replication, self.product_index, d)
        return to_units(self.mean, self.std, z)


def sample_day(stream: DemandStream, day: int) -> int:
    return int(stream.days(day)[0])


def demand_matrix(catalog: ProductCatalog, seed: int, num_replications: int,
                  horizon_days: int) -> np.ndarray:
    """Integer demand for every (replication, product, day), shape (R, P, T)."""
    reps = np.arange(num_replications).reshape(-1, 1, 1)
    prods = np.arange(len(catalog)).reshape(1, -1, 1)
    days = np.arange(horizon_days).reshape(1, 1, -1)
    if num_replications == 0 or horizon_days == 0:
        return np.zeros((num_replications, len(catalog), horizon_days), dtype=np.int64)
    z = standard_normal(seed, reps, prods, days)
    mean = catalog.column("demand_mean").reshape(1, -1, 1)
    std = catalog.column("demand_std").reshape(1, -1, 1)
    return to_units(mean, std, z)


def histogram(stream: DemandStream, days: int, bins: int) -> list[tuple[float, float, int]]:
    """Equal-width histogram of ``days`` consecutive daily samples.

    Bins span ``[min, max]`` of the sample; a constant sample gets a unit-wide
    range centred on the value.  Returns ``(lower, upper, count)`` triples.
    """
    if days < 1 or bins < 1:
        raise ValueError("days and bins must be >= 1")
    sample = stream.days(np.arange(days))
    counts, edges = np.histogram(sample, bins=bins)
    return [(float(lo), float(hi), int(c)) for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
