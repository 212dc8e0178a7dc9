import numpy as np

from invde.catalog import Product, ProductCatalog

BASE = dict(purchase_cost=12.0, lead_time=9, size=0.5, selling_price=16.10, starting_stock=10.0,
            demand_mean=0.0, demand_std=0.0, order_cost=1000.0, holding_cost=20.0,
            stockout_probability=0.5, demand_lead=0.0)


def product(pid="A", **kw) -> Product:
    fields = {**BASE, **kw}
    if "demand_lead" not in kw:
        fields["demand_lead"] = fields["demand_mean"] * fields["lead_time"]
    return Product(id=pid, **fields)


def single(**kw) -> ProductCatalog:
    return ProductCatalog((product(**kw),))


def sphere(X):
    X = np.atleast_2d(X)
    return (X ** 2).sum(axis=1)


class Batched:
    """Wrap a vectorized test function as a counted batch objective."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def evaluate_batch(self, X):
        X = np.atleast_2d(X)
        self.calls += X.shape[0]
        return np.asarray(self.fn(X), dtype=float)

    def __call__(self, x):
        return float(self.evaluate_batch(np.asarray(x)[None, :])[0])
