"""Command-line surface.

Verbs:

  exact      finite-sample df tables (marginal or joint) from gos-core
  limit      fixed-size limit family tables
  mix        random-index mixture tables
  simulate   seeded Monte Carlo report vs the analytic limit
  example    named reproductions of the published range/midrange limits
  selftest   run the invariant suite

Numeric options accept the symbolic constants pi, e, ln2, ln4, inf
(optionally negated) next to plain floats; grids are min:max:count with
a default of 41 points.  Every emitted artifact embeds the fully
resolved configuration, so a run can be reproduced byte for byte.
Exit codes: 0 success, 1 usage error, 2 validation or numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import selftest as selftest_mod
from ._integrate import QuadratureError
from .distributions import DistributionModel, parse_model
from .goscore import joint_df_direct, joint_upper_df, marginal_lower_df, marginal_upper_df
from .limitlaws import TailTransform, kappa, omega_ll, omega_lu_product, omega_uu, rho
from .montecarlo import IndexMode, SimConfig, run_bivariate_sim
from .params import ExtremeSide, GosParams, RankPair, Regime
from .randomindex import IndexLaw, load_tabulated_csv, mixture_ll, mixture_lu, mixture_uu
from .ranges import RangeQuery, midrange_limit_df, range_limit_df, run_statistic_sim
from .specfun import KernelError

OUTPUT_DIR_ENV = "GOSEXTREME_OUTDIR"

_CONSTANTS = {
    "pi": math.pi,
    "e": math.e,
    "ln2": math.log(2.0),
    "ln4": math.log(4.0),
    "inf": math.inf,
}


class UsageError(Exception):
    pass


def parse_number(text: str) -> float:
    """Float literal or symbolic constant (pi, e, ln2, ln4, inf), negatable."""
    word = text.strip().lower()
    sign = 1.0
    if word.startswith("-"):
        sign, word = -1.0, word[1:]
    elif word.startswith("+"):
        word = word[1:]
    if word in _CONSTANTS:
        return sign * _CONSTANTS[word]
    try:
        return sign * float(word)
    except ValueError as exc:
        raise UsageError(
            f"cannot parse number {text!r}; symbolic constants: {sorted(_CONSTANTS)}"
        ) from exc


def parse_grid(text: str, default_count: int = 41) -> list[float]:
    """`min:max:count` (count optional), or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [parse_number(parts[0])]
    if len(parts) not in (2, 3):
        raise UsageError(f"grid spec {text!r} is not min:max[:count]")
    lo, hi = parse_number(parts[0]), parse_number(parts[1])
    count = int(parts[2]) if len(parts) == 3 else default_count
    if count < 1:
        raise UsageError("grid count must be >= 1")
    if count == 1:
        return [lo]
    return [float(v) for v in np.linspace(lo, hi, count)]


def parse_transform(text: str, side: ExtremeSide) -> TailTransform:
    parts = text.strip().lower().split(":")
    kind = parts[0]
    if kind == "gumbel":
        if len(parts) != 1:
            raise UsageError("gumbel takes no exponent")
        return TailTransform(side=side, kind="gumbel")
    if kind in ("frechet", "weibull") and len(parts) == 2:
        return TailTransform(side=side, kind=kind, alpha=parse_number(parts[1]))
    raise UsageError(
        f"cannot parse tail transform {text!r}; expected frechet:a, weibull:a or gumbel"
    )


def parse_law(text: str) -> IndexLaw:
    parts = text.strip().split(":", 1)
    head = parts[0].lower()
    if head in ("exponential", "unit_exponential", "exp"):
        return IndexLaw.unit_exponential()
    if head == "degenerate":
        if len(parts) != 2:
            raise UsageError("degenerate law needs a point: degenerate:<c>")
        return IndexLaw.degenerate(parse_number(parts[1]))
    if head == "table":
        if len(parts) != 2:
            raise UsageError("tabulated law needs a file: table:<path.csv>")
        return load_tabulated_csv(parts[1])
    raise UsageError(
        f"cannot parse index law {text!r}; expected degenerate:<c>, exponential "
        "or table:<path.csv>"
    )


@dataclass
class Table:
    columns: list[str]
    rows: list[list[float]]
    config: dict

    def __post_init__(self):
        if not self.rows:
            raise ValueError("refusing to emit an empty table")


def emit(table: Table, fmt: str) -> str:
    """Serialize a table; CSV carries the config as # comments."""
    if fmt == "json":
        return json.dumps(
            {"config": table.config, "columns": table.columns, "rows": table.rows},
            sort_keys=True,
            indent=2,
        )
    if fmt == "csv":
        lines = [f"# {key}={table.config[key]}" for key in sorted(table.config)]
        lines.append(",".join(table.columns))
        for row in table.rows:
            lines.append(",".join(f"{v:.15g}" for v in row))
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    if not os.path.isabs(out):
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            out = os.path.join(base, out)
    with open(out, "w") as handle:
        handle.write(text)


def _gos_params(args) -> GosParams:
    n = getattr(args, "n", None)
    if n is None:
        n = max(args.r, args.s) + 1
    return GosParams(m=args.m, k=args.k, n=n)


# --- verb runners -----------------------------------------------------------


def _run_exact(args) -> int:
    model = parse_model(args.dist)
    params = GosParams(m=args.m, k=args.k, n=args.n)
    config = {
        "verb": "exact", "dist": model.label(), "m": args.m, "k": args.k,
        "n": args.n, "format": args.format,
    }
    if args.marginal is not None:
        side = ExtremeSide(args.marginal)
        grid = parse_grid(args.grid)
        fn = marginal_upper_df if side == ExtremeSide.UPPER else marginal_lower_df
        rows = [[x, fn(params, model, args.rank, x)] for x in grid]
        config.update({"marginal": side.value, "rank": args.rank, "grid": args.grid})
        _write(emit(Table(["x", "value"], rows, config), args.format), args.out)
        return 0
    if args.regime is None:
        raise UsageError("exact needs either --marginal/--rank or --regime/--r/--s")
    xs, ys = parse_grid(args.x_grid), parse_grid(args.y_grid)
    config.update({
        "regime": args.regime, "r": args.r, "s": args.s,
        "x_grid": args.x_grid, "y_grid": args.y_grid,
    })
    rows = []
    if args.regime == "uu":
        pair = RankPair(r=args.r, s=args.s, regime=Regime.UPPER_UPPER)
        for x in xs:
            for y in ys:
                rows.append([x, y, joint_upper_df(params, model, pair, x, y)])
    elif args.regime == "ll":
        for x in xs:
            for y in ys:
                rows.append([x, y, joint_df_direct(params, model, args.r, args.s, x, y)])
    else:
        raise UsageError("exact joint tables support regimes uu and ll")
    _write(emit(Table(["x", "y", "value"], rows, config), args.format), args.out)
    return 0


def _limit_value(args, params, up, low, x: float, y: float) -> float:
    if args.regime == "uu":
        return omega_uu(params, args.r, args.s, kappa(up, x), kappa(up, y))
    if args.regime == "ll":
        return omega_ll(args.r, args.s, rho(low, x), rho(low, y))
    return omega_lu_product(params, args.r, args.s, rho(low, x), kappa(up, y))


def _mix_value(args, params, up, low, law, x: float, y: float) -> float:
    if args.regime == "uu":
        return mixture_uu(params, args.r, args.s, kappa(up, x), kappa(up, y), law)
    if args.regime == "ll":
        return mixture_ll(args.r, args.s, rho(low, x), rho(low, y), law)
    return mixture_lu(params, args.r, args.s, rho(low, x), kappa(up, y), law)


def _run_limit_like(args, law: IndexLaw | None) -> int:
    params = _gos_params(args)
    up = parse_transform(args.upper_tail, ExtremeSide.UPPER) if args.upper_tail else None
    low = parse_transform(args.lower_tail, ExtremeSide.LOWER) if args.lower_tail else None
    need_up = args.regime in ("uu", "lu")
    need_low = args.regime in ("ll", "lu")
    if need_up and up is None:
        raise UsageError(f"regime {args.regime} needs --upper-tail")
    if need_low and low is None:
        raise UsageError(f"regime {args.regime} needs --lower-tail")
    if args.regime == "uu":
        RankPair(r=args.r, s=args.s, regime=Regime.UPPER_UPPER)
    elif args.regime == "ll":
        RankPair(r=args.r, s=args.s, regime=Regime.LOWER_LOWER)
    xs, ys = parse_grid(args.x_grid), parse_grid(args.y_grid)
    config = {
        "verb": "mix" if law is not None else "limit",
        "regime": args.regime, "m": args.m, "k": args.k, "r": args.r, "s": args.s,
        "upper_tail": args.upper_tail or "", "lower_tail": args.lower_tail or "",
        "x_grid": args.x_grid, "y_grid": args.y_grid, "format": args.format,
    }
    if law is not None:
        config["H"] = law.label()
    rows = []
    for x in xs:
        for y in ys:
            if law is None:
                value = _limit_value(args, params, up, low, x, y)
            else:
                value = _mix_value(args, params, up, low, law, x, y)
            rows.append([x, y, value])
    _write(emit(Table(["x", "y", "value"], rows, config), args.format), args.out)
    return 0


def _run_simulate(args) -> int:
    model = parse_model(args.dist)
    params = GosParams(m=args.m, k=args.k, n=args.n)
    regime = {"uu": Regime.UPPER_UPPER, "ll": Regime.LOWER_LOWER, "lu": Regime.LOWER_UPPER}[
        args.regime
    ]
    pair = RankPair(r=args.r, s=args.s, regime=regime)
    xs = parse_grid(args.x_grid)
    ys = parse_grid(args.y_grid) if args.y_grid else [math.inf]
    grid = tuple((x, y) for x in xs for y in ys)
    cfg = SimConfig(
        params=params, model=model, ranks=pair,
        index_mode=IndexMode.parse(args.index),
        replications=args.reps, seed=args.seed, eval_grid=grid,
    )
    report = run_bivariate_sim(cfg)
    if args.format == "json":
        _write(report.to_json(), args.out)
    else:
        _write("\n".join(report.csv_lines()) + "\n", args.out)
    return 0


_EXAMPLE_STATS = ("range", "midrange")
_EXAMPLE_FAMILIES = {
    "normal": "normal", "cauchy": "cauchy", "pareto": "pareto",
    "uniform": "uniform", "beta": "beta", "power": "power",
    "lognormal": "lognormal", "exponential": "exponential",
    "rayleigh": "rayleigh", "logistic": "logistic", "laplace": "laplace",
}
_DEFAULT_GRIDS = {
    "range": "-2:6:41",
    "midrange": "-4:4:41",
}


def example_names() -> list[str]:
    return sorted(f"{fam}-{stat}" for fam in _EXAMPLE_FAMILIES for stat in _EXAMPLE_STATS)


def _example_model(family: str, args) -> DistributionModel:
    if family in ("pareto", "exponential", "rayleigh"):
        return DistributionModel(family, {"sigma": args.sigma})
    if family == "uniform":
        return DistributionModel("uniform", {"theta": args.theta})
    if family == "beta":
        beta_p = args.beta
        alpha = args.alpha if args.alpha is not None else (args.m + 1.0) * beta_p
        return DistributionModel("beta", {"alpha": alpha, "beta": beta_p})
    if family == "power":
        alpha = args.alpha if args.alpha is not None else args.m + 1.0
        return DistributionModel("power", {"alpha": alpha})
    return DistributionModel(family, {})


def _run_example(args) -> int:
    name = args.name.lower()
    try:
        family_key, stat = name.rsplit("-", 1)
        family = _EXAMPLE_FAMILIES[family_key]
        assert stat in _EXAMPLE_STATS
    except (ValueError, KeyError, AssertionError):
        raise UsageError(
            f"unknown example {args.name!r}; available: {', '.join(example_names())}"
        ) from None
    model = _example_model(family, args)
    law = parse_law(args.law)
    n = args.sim_n if args.sim_n is not None else 500
    params = GosParams(m=args.m, k=args.k, n=n)
    query = RangeQuery(model=model, params=params, law=law, statistic=stat)
    evaluate = range_limit_df if stat == "range" else midrange_limit_df

    if args.at is not None:
        grid = [parse_number(args.at)]
        grid_label = args.at
    else:
        grid_label = args.grid or _DEFAULT_GRIDS[stat]
        grid = parse_grid(grid_label)

    config = {
        "verb": "example", "name": name, "dist": model.label(),
        "m": args.m, "k": args.k, "law": law.label(), "grid": grid_label,
        "format": args.format,
    }
    columns = ["t", "analytic"]
    rows = [[t, evaluate(query, t)] for t in grid]

    if args.sim_reps:
        mode = _mode_for_law(law)
        report = run_statistic_sim(query, mode, grid, args.sim_reps, args.sim_seed)
        config.update({
            "sim_n": params.n, "sim_reps": args.sim_reps, "sim_seed": args.sim_seed,
            "sim_index_mode": mode.label(),
            "sim_sup_distance": f"{report.sup_distance:.15g}",
        })
        columns += ["empirical", "stderr"]
        for row, e, se in zip(rows, report.empirical, report.standard_errors):
            row.extend([e, se])
    _write(emit(Table(columns, rows, config), args.format), args.out)
    return 0


def _mode_for_law(law: IndexLaw) -> IndexMode:
    """Index mode whose nu_n/n limit is the given law (for sim overlays)."""
    if law.kind == "unit_exponential":
        return IndexMode.parse("geometric")
    if law.kind == "degenerate":
        if law.c == 1.0:
            return IndexMode.parse("fixed")
        return IndexMode.parse(f"dependent:const:{law.c:g}")
    if law.kind == "tabulated" and len(law.grid) == 2:
        (a, h0), (b, h1) = law.grid
        if h0 == 0.0 and h1 == 1.0:
            return IndexMode.parse(f"dependent:uniform:{a:g}:{b:g}")
    raise UsageError("no built-in sampler realizes this index law")


def _run_selftest(args) -> int:
    _, failed, lines = selftest_mod.run(fast=args.fast)
    _write("\n".join(lines) + "\n", args.out)
    return 2 if failed else 0


# --- parser -----------------------------------------------------------------


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        raise _UsageExit(message)


def _add_common_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help=f"output path (relative paths join ${OUTPUT_DIR_ENV})")


def _add_gos(p, with_n: bool):
    p.add_argument("--m", type=parse_number, default=0.0)
    p.add_argument("--k", type=parse_number, default=1.0)
    if with_n:
        p.add_argument("--n", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gosextreme", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("exact", help="finite-sample df tables")
    p.add_argument("--dist", "--model", dest="dist", required=True)
    _add_gos(p, with_n=True)
    p.add_argument("--marginal", choices=("upper", "lower"))
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--grid", default="-3:3:41")
    p.add_argument("--regime", choices=("uu", "ll"))
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--x-grid", dest="x_grid", default="-3:3:11")
    p.add_argument("--y-grid", dest="y_grid", default="-3:3:11")
    _add_common_output(p)
    p.set_defaults(run=_run_exact)

    for verb in ("limit", "mix"):
        p = sub.add_parser(verb, help=f"{verb} df tables")
        p.add_argument("--regime", choices=("uu", "ll", "lu"), required=True)
        _add_gos(p, with_n=False)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--upper-tail", dest="upper_tail", default=None,
                       help="frechet:a | weibull:a | gumbel")
        p.add_argument("--lower-tail", dest="lower_tail", default=None)
        p.add_argument("--x-grid", dest="x_grid", default="-3:3:11")
        p.add_argument("--y-grid", dest="y_grid", default="-3:3:11")
        if verb == "mix":
            p.add_argument("--H", dest="law", required=True,
                           help="degenerate:<c> | exponential | table:<path.csv>")
        _add_common_output(p)
        p.set_defaults(run=(lambda a: _run_limit_like(a, parse_law(a.law)))
                       if verb == "mix" else (lambda a: _run_limit_like(a, None)))

    p = sub.add_parser("simulate", help="Monte Carlo vs the analytic limit")
    p.add_argument("--dist", "--model", dest="dist", required=True)
    _add_gos(p, with_n=True)
    p.add_argument("--regime", choices=("uu", "ll", "lu"), required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--index", default="fixed",
                   help="fixed | geometric | dependent:const:<c> | dependent:uniform:<a>:<b>")
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x-grid", dest="x_grid", required=True)
    p.add_argument("--y-grid", dest="y_grid", default=None)
    _add_common_output(p)
    p.set_defaults(run=_run_simulate, format="json")

    p = sub.add_parser("example", help="published range/midrange reproductions")
    p.add_argument("name", help=", ".join(example_names()))
    _add_gos(p, with_n=False)
    p.add_argument("--law", default="exponential")
    p.add_argument("--at", default=None, help="evaluate at a single point")
    p.add_argument("--grid", default=None)
    p.add_argument("--sigma", type=parse_number, default=1.0)
    p.add_argument("--theta", type=parse_number, default=1.0)
    p.add_argument("--alpha", type=parse_number, default=None)
    p.add_argument("--beta", type=parse_number, default=2.0)
    p.add_argument("--sim-n", dest="sim_n", type=int, default=None)
    p.add_argument("--sim-reps", dest="sim_reps", type=int, default=0)
    p.add_argument("--sim-seed", dest="sim_seed", type=int, default=0)
    _add_common_output(p)
    p.set_defaults(run=_run_example)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--fast", action="store_true", help="skip the Monte Carlo tier")
    p.add_argument("--out", default=None)
    p.set_defaults(run=_run_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, KernelError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
