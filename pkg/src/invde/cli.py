"""Command-line entry point: ``invde <command> [flags]``.

Exit status 0 on success, 1 on bad input, 2 on an internal failure.  With
``--out PATH`` every command writes both ``PATH.json`` (report plus run
manifest) and ``PATH.csv`` (tabular part); a short table goes to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import CalibrationSpace, abc_analysis, calibrate, sensitivity
from .catalog import CatalogError, resolve_catalog
from .demand import DemandStream, histogram
from .objective import (OPTIMIZATION_SAMPLES, InventoryObjective, derive_order_quantities,
                        derive_reorder_levels, rescore)
from .optimizers import ALGORITHMS, OptimizerConfig, compare, optimize
from .simulator import PolicyParams, SimConfig, run_mcs, simulate_once

MODES = {"cr": "continuous-review", "cross-dock": "cross-dock"}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return v


def _count(minimum: int):
    def parse(text: str) -> int:
        v = int(text)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v
    return parse


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--catalog", default="builtin", help="catalog CSV path or 'builtin'")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--days", type=_count(0), default=365)
    common.add_argument("--samples", type=_count(1), default=1000,
                        help="replications for simulation and final scoring")
    common.add_argument("--cost-model", choices=("breakdown", "paper-loop"), default="breakdown")
    common.add_argument("--arrival", choices=("pipeline", "immediate"), default="pipeline")
    common.add_argument("--mode", choices=tuple(MODES), default="cr")
    common.add_argument("--threads", type=_count(1), default=None)
    common.add_argument("--out", default=None, help="output path stem; writes .json and .csv")

    search = _Parser(add_help=False)
    search.add_argument("--pop", type=_count(1), default=50)
    search.add_argument("--gens", type=_count(0), default=100)
    search.add_argument("--budget", type=_count(1), default=None, help="objective evaluations per run")
    search.add_argument("--ensemble", type=_count(1), default=5)
    search.add_argument("--search-samples", type=_count(1), default=OPTIMIZATION_SAMPLES,
                        help="replications per objective evaluation during search")

    parser = _Parser(prog="invde", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"invde {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo cost of a given policy")
    p.add_argument("--stocks", type=_floats, default=None, help="starting stocks (default: catalog)")
    p.add_argument("--reorder", type=_floats, default=None, help="reorder levels (default: mu*L + sqrt(L)*sigma)")
    p.add_argument("--order-qty", type=_floats, default=None, help="order quantities (default: max(r - x, 0))")
    p.add_argument("--safety", type=_floats, default=None)
    p.add_argument("--trace", default=None, help="write the replication-0 daily trace CSV here")

    p = sub.add_parser("optimize", parents=[common, search], help="one optimizer run")
    p.add_argument("--algo", choices=ALGORITHMS, default="de-best1bin")

    p = sub.add_parser("compare", parents=[common, search], help="equal-budget algorithm comparison")
    p.add_argument("--algos", default="de-best1bin,random-search,sa,gwo,woa")
    p.add_argument("--seeds", type=_ints, default=None, help="optimizer seeds (default: --seed)")

    p = sub.add_parser("calibrate", parents=[common], help="LHS calibration of policy multipliers")
    p.add_argument("--rows", type=_count(1), default=27)
    for name, default in (("reorder", "0.8,1.0,1.2"), ("safety", "0.5,1.0,0.5"),
                          ("lead", "0.8,1.0,1.2"), ("order-qty", "0.8,1.0,1.2")):
        p.add_argument(f"--{name}-grid", type=_floats, default=_floats(default))

    p = sub.add_parser("abc", parents=[common], help="ABC / Pareto classification")
    p.add_argument("--cutoff-a", type=float, default=0.8)
    p.add_argument("--cutoff-b", type=float, default=0.95)

    p = sub.add_parser("sensitivity", parents=[common, search], help="population-size sensitivity")
    p.add_argument("--pops", type=_ints, default=[10, 20, 50, 100])
    p.add_argument("--seeds", type=_ints, default=None)

    p = sub.add_parser("demand-hist", parents=[common], help="daily demand histogram per product")
    p.add_argument("--bins", type=_count(1), default=20)
    p.add_argument("--replication", type=_count(0), default=0)
    return parser


# --------------------------------------------------------------------------- helpers


def _sim_config(args, samples: int | None = None) -> SimConfig:
    return SimConfig(horizon_days=args.days, num_simulations=samples or args.samples, seed=args.seed,
                     cost_model=args.cost_model, arrival_model=args.arrival)


def _opt_config(args, algorithm: str) -> OptimizerConfig:
    return OptimizerConfig(algorithm=algorithm, population=args.pop, generations=args.gens,
                           ensemble_size=args.ensemble, seed=args.seed, max_evaluations=args.budget)


def _vector(values, n: int, name: str) -> np.ndarray:
    if len(values) != n:
        raise InputError(f"--{name} needs {n} values, got {len(values)}")
    return np.asarray(values, dtype=np.float64)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _outputs(args) -> dict:
    if not args.out:
        return {}
    stem = Path(args.out)
    if stem.suffix in (".json", ".csv"):
        stem = stem.with_suffix("")
    return {"json": str(stem.with_suffix(".json")), "csv": str(stem.with_suffix(".csv"))}


def _manifest(args, outputs: dict) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "func")}
    return {
        "command": args.command,
        "catalog": args.catalog,
        "seed": args.seed,
        "tool_version": __version__,
        "config": flags,
        "outputs": outputs,
    }


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _emit(args, report: dict, write_table) -> None:
    outputs = _outputs(args)
    if outputs:
        doc = {"manifest": _manifest(args, outputs), "report": report}
        Path(outputs["json"]).write_text(json.dumps(_jsonable(doc), indent=2) + "\n")
        write_table(outputs["csv"])


def _print_table(header, rows) -> None:
    cells = [[str(h) for h in header]] + [[f"{v:,.2f}" if isinstance(v, float) else str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))


# --------------------------------------------------------------------------- commands


def cmd_simulate(args, catalog) -> None:
    n = len(catalog)
    x = catalog.column("starting_stock") if args.stocks is None else _vector(args.stocks, n, "stocks")
    r = derive_reorder_levels(catalog) if args.reorder is None else _vector(args.reorder, n, "reorder")
    q = derive_order_quantities(r, x) if args.order_qty is None else _vector(args.order_qty, n, "order-qty")
    s = None if args.safety is None else _vector(args.safety, n, "safety")
    policy = PolicyParams(tuple(r), tuple(q), None if s is None else tuple(s), MODES[args.mode])
    config = _sim_config(args)
    summary = run_mcs(catalog, x, policy, config)
    if args.trace:
        simulate_once(catalog, x, policy, config, 0, trace=True).write_trace(args.trace)
    report = {
        "policy": {"starting_stocks": x, "reorder_levels": r, "order_quantities": q,
                   "safety_stocks": list(policy.safety_stocks), "mode": policy.mode},
        **summary.as_dict(),
    }
    b = summary.mean_breakdown
    header = ["purchase", "order", "holding", "stockout", "total", "mean_cost", "average_cost",
              "average_inventory_level"]
    row = [b.purchase, b.order, b.holding, b.stockout, b.total, summary.mean_cost,
           summary.average_cost, summary.average_inventory_level]
    _print_table(header, [row])
    _emit(args, report, lambda p: _write_csv(p, header, [[repr(float(v)) for v in row]]))


def cmd_optimize(args, catalog) -> None:
    search = _sim_config(args, args.search_samples)
    objective = InventoryObjective(catalog, search, MODES[args.mode])
    run = optimize(objective, objective.bounds, _opt_config(args, args.algo))
    final = rescore(run.best_x, catalog, search, args.samples, mode=MODES[args.mode])
    report = {**run.as_dict(), "rescored_cost": final, "objective_calls": objective.calls}
    ids = catalog.ids
    header = ["algorithm", *(f"stock_{p}" for p in ids), "search_cost", "total_cost", "evaluations"]
    row = [run.algorithm, *(int(np.floor(v + 0.5)) for v in run.best_x), run.best_cost, final,
           run.evaluations_used]
    _print_table(header, [row])
    _emit(args, report, lambda p: _write_csv(
        p, header, [[v if not isinstance(v, float) else repr(v) for v in row]]))


def _budget(args, algorithm: str = "de-best1bin") -> int:
    return args.budget if args.budget is not None else _opt_config(args, algorithm).budget


def cmd_compare(args, catalog) -> None:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise InputError(f"unknown algorithm(s): {', '.join(bad) or '(none)'}")
    seeds = args.seeds or [args.seed]
    base = OptimizerConfig(ensemble_size=args.ensemble)
    rep = compare(catalog, _sim_config(args, args.search_samples), algos, _budget(args), seeds,
                  args.pop, args.samples, MODES[args.mode], base)
    report = {"rows": [r.as_dict() for r in rep.rows], "budget": _budget(args), "seeds": seeds}
    _print_table(["algorithm", *(f"stock_{p}" for p in rep.product_ids), "total_cost", "evaluations"],
                 [[r.algorithm, *(int(np.floor(v + 0.5)) for v in r.stocks), r.total_cost, r.evaluations]
                  for r in rep.rows])
    _emit(args, report, rep.write_csv)


def cmd_calibrate(args, catalog) -> None:
    space = CalibrationSpace(tuple(args.reorder_grid), tuple(args.safety_grid), tuple(args.lead_grid),
                             tuple(args.order_qty_grid), args.rows, args.seed)
    rep = calibrate(catalog, space, _sim_config(args), MODES[args.mode])
    report = {
        "best_index": rep.best_index,
        "level_counts": rep.level_counts,
        "rows": [{"multipliers": r.multipliers, "lead_times": r.lead_times,
                  "reorder_points": r.reorder_points, "safety_stocks": r.safety_stocks,
                  "order_quantities": r.order_quantities, "average_cost": r.average_cost,
                  "mean_cost": r.mean_cost, "average_inventory_level": r.average_inventory_level}
                 for r in rep.rows],
    }
    b = rep.best
    ids = rep.product_ids
    print(f"best row {rep.best_index} of {len(rep.rows)}; level counts {rep.level_counts}")
    _print_table(["", *ids, "lead_time", "order_qty", "average_cost"],
                 [["reorder point", *(int(np.floor(v + 0.5)) for v in b.reorder_points),
                   b.multipliers["lead"], b.multipliers["order_qty"], b.average_cost],
                  ["safety stock", *(int(np.floor(v + 0.5)) for v in b.safety_stocks), "", "", ""]])
    _emit(args, report, rep.write_csv)


def cmd_abc(args, catalog) -> None:
    rep = abc_analysis(catalog, args.cutoff_a, args.cutoff_b)
    rows = [[r.product_id, r.cv_annual, r.share, r.cumulative_share, r.category] for r in rep.rows]
    report = {"total_cv": rep.total_cv, "cutoff_a": rep.cutoff_a, "cutoff_b": rep.cutoff_b,
              "rows": [dict(zip(("product_id", "cv_annual", "share", "cumulative_share", "category"), r))
                       for r in rows]}
    _print_table(["product_id", "cv_annual", "share", "cumulative_share", "category"],
                 [[p, cv, f"{s:.4f}", f"{c:.4f}", k] for p, cv, s, c, k in rows])
    _emit(args, report, rep.write_csv)


def cmd_sensitivity(args, catalog) -> None:
    seeds = args.seeds or [args.seed]
    budget = args.budget if args.budget is not None else 20_000
    cfg = OptimizerConfig(algorithm="de-multistart", ensemble_size=args.ensemble, max_evaluations=budget)
    rep = sensitivity(catalog, args.pops, cfg, seeds, _sim_config(args, args.search_samples),
                      args.samples, MODES[args.mode])
    report = {"spread": rep.spread, "budget": budget, "seeds": seeds,
              "rows": [{"population": r.population, "stocks": r.stocks, "total_cost": r.total_cost,
                        "seed_costs": r.seed_costs} for r in rep.rows]}
    _print_table(["population", *(f"stock_{p}" for p in rep.product_ids), "total_cost"],
                 [[r.population, *(int(np.floor(v + 0.5)) for v in r.stocks), r.total_cost] for r in rep.rows])
    print(f"relative spread {rep.spread:.4f}")
    _emit(args, report, rep.write_csv)


def cmd_demand_hist(args, catalog) -> None:
    days = max(args.days, 1)
    rows = []
    for i, p in enumerate(catalog):
        stream = DemandStream.for_product(catalog, i, args.replication, args.seed)
        for lo, hi, n in histogram(stream, days, args.bins):
            rows.append([p.id, lo, hi, n])
    header = ["product_id", "bin_lo", "bin_hi", "count"]
    report = {"days": days, "bins": args.bins, "replication": args.replication,
              "rows": [dict(zip(header, r)) for r in rows]}
    for p in catalog:
        counts = [r[3] for r in rows if r[0] == p.id]
        print(f"{p.id}: " + " ".join(str(c) for c in counts))
    _emit(args, report, lambda path: _write_csv(
        path, header, [[r[0], repr(r[1]), repr(r[2]), r[3]] for r in rows]))


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "compare": cmd_compare,
    "calibrate": cmd_calibrate,
    "abc": cmd_abc,
    "sensitivity": cmd_sensitivity,
    "demand-hist": cmd_demand_hist,
}


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads:
            import numba

            numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
        catalog = resolve_catalog(args.catalog)
        COMMANDS[args.command](args, catalog)
    except (InputError, CatalogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_command())
