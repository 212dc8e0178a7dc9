"""Product data model and catalog CSV input/output."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import astuple, dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

FIELDS = (
    "id",
    "purchase_cost",
    "lead_time",
    "size",
    "selling_price",
    "starting_stock",
    "demand_mean",
    "demand_std",
    "order_cost",
    "holding_cost",
    "stockout_probability",
    "demand_lead",
)

# relative tolerance for demand_lead vs demand_mean * lead_time before warning
DEMAND_LEAD_RTOL = 0.02


class CatalogError(ValueError):
    """Raised when a catalog file or product record is invalid."""


class DemandLeadWarning(UserWarning):
    """demand_lead disagrees with demand_mean * lead_time."""


@dataclass(frozen=True)
class Product:
    id: str
    purchase_cost: float
    lead_time: int
    size: float
    selling_price: float
    starting_stock: float
    demand_mean: float
    demand_std: float
    order_cost: float
    holding_cost: float
    stockout_probability: float
    demand_lead: float

    def __post_init__(self):
        problems = _check_product(self)
        if problems:
            raise CatalogError(f"product {self.id!r}: " + "; ".join(problems))


def _check_product(p: Product) -> list[str]:
    out = []
    if not p.id:
        out.append("empty id")
    for name in FIELDS[1:]:
        v = getattr(p, name)
        if not math.isfinite(v):
            out.append(f"{name} is not finite")
    for name in ("purchase_cost", "selling_price", "order_cost", "holding_cost", "size",
                 "starting_stock", "demand_mean", "demand_std", "demand_lead"):
        if getattr(p, name) < 0:
            out.append(f"{name} must be >= 0")
    if p.lead_time < 1:
        out.append("lead_time must be >= 1")
    if not 0.0 <= p.stockout_probability <= 1.0:
        out.append("stockout_probability must lie in [0, 1]")
    return out


@dataclass(frozen=True)
class ProductCatalog:
    """Ordered, non-empty collection of products.

    The order of ``products`` fixes the index ``i`` used by every vector
    elsewhere in the package (starting stocks, reorder levels, bounds).
    """

    products: tuple[Product, ...]

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(self.products))
        if not self.products:
            raise CatalogError("empty catalog")
        seen = set()
        for p in self.products:
            if p.id in seen:
                raise CatalogError(f"duplicate id {p.id!r}")
            seen.add(p.id)

    def __len__(self) -> int:
        return len(self.products)

    def __getitem__(self, i: int) -> Product:
        return self.products[i]

    def __iter__(self) -> Iterator[Product]:
        return iter(self.products)

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.products]

    def column(self, name: str) -> np.ndarray:
        """One field across all products as an array (int64 for lead_time)."""
        dtype = np.int64 if name == "lead_time" else np.float64
        return np.array([getattr(p, name) for p in self.products], dtype=dtype)

    def replace_column(self, name: str, values: Sequence) -> "ProductCatalog":
        if len(values) != len(self):
            raise CatalogError(f"expected {len(self)} values for {name}, got {len(values)}")
        cast = int if name == "lead_time" else float
        return ProductCatalog(
            tuple(replace(p, **{name: cast(v)}) for p, v in zip(self.products, values))
        )


def _parse_cell(name: str, raw: str, row: int):
    raw = raw.strip()
    if name == "id":
        if not raw:
            raise CatalogError(f"row {row}, column {name!r}: empty id")
        return raw
    try:
        value = float(raw)
    except ValueError:
        raise CatalogError(f"row {row}, column {name!r}: non-numeric value {raw!r}") from None
    if name == "lead_time":
        if not value.is_integer():
            raise CatalogError(f"row {row}, column {name!r}: lead_time must be whole days, got {raw!r}")
        return int(value)
    return value


def _warn_demand_lead(p: Product, row: int | None = None) -> None:
    expected = p.demand_mean * p.lead_time
    if expected == 0:
        deviation = 0.0 if p.demand_lead == 0 else math.inf
    else:
        deviation = abs(p.demand_lead - expected) / expected
    if deviation > DEMAND_LEAD_RTOL:
        where = f" (row {row})" if row is not None else ""
        warnings.warn(
            f"product {p.id!r}{where}: demand_lead {p.demand_lead:g} deviates "
            f"{deviation:.1%} from demand_mean*lead_time = {expected:g}",
            DemandLeadWarning,
            stacklevel=3,
        )


def load_catalog(path: str | Path) -> ProductCatalog:
    """Read a catalog CSV.

    The header must name exactly the twelve product fields (any order).
    Errors carry the 1-based file row (header is row 1) and column.
    """
    path = Path(path)
    if not path.is_file():
        raise CatalogError(f"catalog file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise CatalogError("empty catalog") from None
        missing = [f for f in FIELDS if f not in header]
        unknown = [h for h in header if h not in FIELDS]
        if missing:
            raise CatalogError(f"row 1: missing column(s) {', '.join(missing)}")
        if unknown:
            raise CatalogError(f"row 1: unknown column(s) {', '.join(unknown)}")
        if len(set(header)) != len(header):
            raise CatalogError("row 1: repeated column name")

        products = []
        seen: dict[str, int] = {}
        for row, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != len(header):
                raise CatalogError(f"row {row}: expected {len(header)} cells, got {len(cells)}")
            values = {name: _parse_cell(name, raw, row) for name, raw in zip(header, cells)}
            if values["id"] in seen:
                raise CatalogError(f"duplicate id at row {row}: {values['id']!r} first seen at row {seen[values['id']]}")
            seen[values["id"]] = row
            try:
                product = Product(**values)
            except CatalogError as exc:
                raise CatalogError(f"row {row}: {exc}") from None
            _warn_demand_lead(product, row)
            products.append(product)
    if not products:
        raise CatalogError("empty catalog")
    return ProductCatalog(tuple(products))


def _format(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_catalog(catalog: ProductCatalog, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for p in catalog:
            w.writerow([_format(v) for v in astuple(p)])


def builtin_paper_catalog() -> ProductCatalog:
    """The four-product case-study catalog (products A-D), bundled with the package."""
    ref = resources.files("invde") / "data" / "builtin_catalog.csv"
    with resources.as_file(ref) as path, warnings.catch_warnings():
        # products A and C knowingly carry a demand_lead that is not mean*lead
        warnings.simplefilter("ignore", DemandLeadWarning)
        return load_catalog(path)


def resolve_catalog(source: str | Path) -> ProductCatalog:
    """``"builtin"`` selects the bundled catalog; anything else is a CSV path."""
    if str(source) == "builtin":
        return builtin_paper_catalog()
    return load_catalog(source)

