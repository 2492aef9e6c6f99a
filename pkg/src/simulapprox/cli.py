"""Command-line front end.

    simulapprox approximate --fn exp-sum --n 2 --m 1 --degrees 8,16,32,64
    simulapprox verify-identity --m 3 --n 2
    simulapprox poincare --statement order-one --fn x1 --p inf
    simulapprox mollify-demo --steps 4,8,16

``--n`` is the dimension N.  Exit codes: 0 success, 1 numerical failure,
2 usage or input error.  Failures print one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import bernstein
from .approximator import MAX_ORDER, ApproxConfig, approximate
from .errors import ApproxError, ConfigurationError, InputError, NumericalFailure
from .grid import GridSpec, default_grid
from .mollifier import convergence_table
from .oracles import BUILTINS, builtin
from .poincare import (
    ConstantTracker, TraceChain, check_detailed, check_order_one, check_standard, parse_p,
    sweep_detailed, sweep_order_one, sweep_standard,
)
from .sigma_partition import verify_identity

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "approximate": {"fn": "exp-sum", "n": 2, "m": 1, "degrees": "8,16,32,64", "float": False},
    "verify-identity": {"n": 1, "m": 1},
    "poincare": {"statement": "order-one", "fn": None, "p": "inf", "n": 1, "m": 1,
                 "cases": 100, "degree": None, "chain_start": None, "chain_steps": None},
    "mollify-demo": {"fn": "kink", "n": 1, "m": 1, "steps": "4,8,16", "target_order": None,
                     "smoothness": None, "quad_nodes": 24},
}
COMMON = {"out": None, "format": "csv", "seed": 0, "grid": None}


class UsageError(ApproxError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simulapprox", description="Simultaneous polynomial approximation experiments.",
                     argument_default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", type=int)
        p.add_argument("--grid", type=int, help="grid nodes per axis")
        p.add_argument("--config", help="JSON file of defaults; flags win")
        p.add_argument("--n", type=int, help="dimension N")
        p.add_argument("--m", type=int, help="derivative order m")

    p = sub.add_parser("approximate", help="run the approximation pipeline")
    common(p)
    p.add_argument("--fn", help=f"test function: {', '.join(BUILTINS)}")
    p.add_argument("--degrees", help="comma-separated Bernstein degrees")
    p.add_argument("--float", action="store_const", const=True,
                   help="float coefficients instead of exact rationals")

    p = sub.add_parser("verify-identity", help="residual of the partition identity")
    common(p)

    p = sub.add_parser("poincare", help="Poincare inequality checks")
    common(p)
    p.add_argument("--statement", choices=("order-one", "detailed", "standard"))
    p.add_argument("--fn", help="single built-in function instead of a random sweep")
    p.add_argument("--p", help="1, 2 or inf")
    p.add_argument("--cases", type=int)
    p.add_argument("--degree", type=int, help="degree of the random polynomial factor")
    p.add_argument("--chain-start", help="detailed with --fn: start multi-index, e.g. 1,0")
    p.add_argument("--chain-steps", help="detailed with --fn: axis:face steps, e.g. 2:0")

    p = sub.add_parser("mollify-demo", help="mollifier convergence table")
    common(p)
    p.add_argument("--fn", help="test function (default kink)")
    p.add_argument("--steps", help="comma-separated dilation steps n")
    p.add_argument("--target-order", type=int)
    p.add_argument("--smoothness", type=int)
    p.add_argument("--quad-nodes", type=int)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the optional JSON config and explicit flags."""
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[args.command])
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config"):
            cfg[key] = value
    cfg["command"] = args.command
    if not 1 <= cfg["n"] <= bernstein.MAX_DIMENSION:
        raise UsageError(f"--n must be in [1, {bernstein.MAX_DIMENSION}]")
    if not 1 <= cfg["m"] <= MAX_ORDER:
        raise UsageError(f"--m must be in [1, {MAX_ORDER}]")
    return cfg


def _grid(cfg) -> GridSpec:
    return GridSpec(cfg["grid"]) if cfg["grid"] else default_grid(cfg["n"])


def _fmt(x) -> str:
    return repr(float(x))


def _emit(cfg, header, rows, payload) -> str:
    if cfg["format"] == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run_approximate(cfg) -> str:
    u = builtin(cfg["fn"], cfg["n"], cfg["m"])
    grid = _grid(cfg)
    rows, runs = [], []
    for degree in _int_list(cfg["degrees"]):
        if not 1 <= degree <= bernstein.MAX_DEGREE:
            raise UsageError(f"degree {degree} outside [1, {bernstein.MAX_DEGREE}]")
        acfg = ApproxConfig(cfg["m"], cfg["n"], degree, grid, exact=not cfg["float"])
        _, report = approximate(u, acfg)
        sig = report.max_sigma_error
        for alpha, err in report.alpha_errors.items():
            rows.append([degree, ",".join(map(str, alpha)), _fmt(err), _fmt(sig)])
        runs.append({"degree": degree, "max_error": report.max_error, **report.to_json()})
    return _emit(cfg, ["degree", "alpha", "sup_error", "max_sigma_bern_error"], rows,
                 {"function": cfg["fn"], "n": cfg["n"], "m": cfg["m"], "runs": runs})


def run_verify_identity(cfg) -> str:
    residual = verify_identity(cfg["m"], cfg["n"])
    return _emit(cfg, ["m", "n", "residual"], [[cfg["m"], cfg["n"], _fmt(residual)]],
                 {"m": cfg["m"], "n": cfg["n"], "residual": residual})


def _parse_chain(cfg) -> TraceChain:
    if not cfg["chain_start"] or not cfg["chain_steps"]:
        raise UsageError("detailed with --fn needs --chain-start and --chain-steps")
    steps = []
    for item in str(cfg["chain_steps"]).split(","):
        try:
            axis, face = item.split(":")
            steps.append((int(axis) - 1, int(face)))
        except ValueError as exc:
            raise UsageError(f"bad chain step {item!r}; use axis:face") from exc
    return TraceChain.build(_int_list(cfg["chain_start"]), steps)


def run_poincare(cfg) -> str:
    grid = _grid(cfg)
    p = parse_p(cfg["p"])
    n, m, stmt = cfg["n"], cfg["m"], cfg["statement"]
    rows = []
    if cfg["fn"]:
        u = builtin(cfg["fn"], n, m)
        if stmt == "order-one":
            r = check_order_one(u, p, grid)
            results = [(r.lhs, r.rhs, r.lhs / r.rhs if r.rhs else math.nan, r.holds)]
        elif stmt == "detailed":
            r = check_detailed(u, _parse_chain(cfg), p, grid)
            results = [(r.lhs, r.rhs, r.ratio, not r.degenerate)]
        else:
            r = check_standard(u, m, p, grid)
            results = [(r.lhs, r.rhs, r.ratio, not r.degenerate)]
    else:
        cases, seed = cfg["cases"], cfg["seed"]
        if stmt == "order-one":
            res = sweep_order_one(cases, p, n, grid, seed, degree=cfg["degree"] or 5)
            results = [(r.lhs, r.rhs, r.lhs / r.rhs if r.rhs else math.nan, r.holds) for r in res]
        elif stmt == "detailed":
            res = sweep_detailed(cases, m, p, n, grid, seed, degree=cfg["degree"] or 3,
                                 tracker=ConstantTracker())
            results = [(r.lhs, r.rhs, r.ratio, not r.degenerate) for r in res]
        else:
            res = sweep_standard(cases, m, p, n, grid, seed, degree=cfg["degree"] or 3)
            results = [(r.lhs, r.rhs, r.ratio, not r.degenerate) for r in res]
    for i, (lhs, rhs, ratio, holds) in enumerate(results):
        rows.append([i, _fmt(lhs), _fmt(rhs), _fmt(ratio), str(bool(holds)).lower()])
    payload = {"statement": stmt, "p": "inf" if p == math.inf else p, "n": n, "m": m,
               "cases": [dict(zip(("case_id", "lhs", "rhs", "ratio", "holds"),
                                  [i, lhs, rhs, ratio if math.isfinite(ratio) else None, bool(h)]))
                         for i, (lhs, rhs, ratio, h) in enumerate(results)]}
    return _emit(cfg, ["case_id", "lhs", "rhs", "ratio", "holds"], rows, payload)


def run_mollify(cfg) -> str:
    n, m = cfg["n"], cfg["m"]
    u = builtin(cfg["fn"], n, m)
    if u.max_order is None:
        raise UsageError(f"{cfg['fn']} is smooth; mollify-demo needs a function with finite order")
    target = cfg["target_order"] if cfg["target_order"] is not None else n * m
    steps = _int_list(cfg["steps"])
    table = convergence_table(u, steps, target, _grid(cfg), cfg["smoothness"], cfg["quad_nodes"])
    rows = [[step, _fmt(err)] for step, err in table]
    payload = {"function": cfg["fn"], "n": n, "m": m, "target_order": target,
               "rows": [{"step": s, "error": e} for s, e in table]}
    return _emit(cfg, ["n", "error"], rows, payload)


RUNNERS = {
    "approximate": run_approximate,
    "verify-identity": run_verify_identity,
    "poincare": run_poincare,
    "mollify-demo": run_mollify,
}


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": " ".join(str(message).split())}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        text = RUNNERS[cfg["command"]](cfg)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except NumericalFailure as exc:
        return _fail("numerical", exc, EXIT_NUMERICAL)
    except (InputError, ConfigurationError) as exc:
        return _fail("input", exc, EXIT_USAGE)
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
