"""Command-line front end: ``cohbell <command> [flags]``.

Exit codes: 0 success, 1 reproduction mismatch, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .bell import b_cl1, b_cr, chsh, quartet_chsh_optimal, quartet_example1, quartet_example2
from .errors import CohBellError
from .experiments import (
    fmt,
    pure_sweep,
    records_json,
    reproduce_all,
    werner_csv,
    werner_grid,
    werner_rel_ent_root,
    werner_sweep,
    witness_csv,
    witness_evaluate,
    witness_l1_value,
)
from .optimizer import Functional, grid_refine, maximize, thread_count
from .states import QState, load_state, singlet, werner

QUARTETS = {
    "example1": quartet_example1,
    "example2": quartet_example2,
    "chsh-optimal": quartet_chsh_optimal,
}


class UsageError(Exception):
    pass


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v, 6)
    return str(v)


def _csv(header, rows) -> str:
    def c(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return fmt(v)
        return str(v)

    return ",".join(header) + "\n" + "".join(",".join(c(v) for v in r) + "\n" for r in rows)


def _json(payload) -> str:
    def clean(x):
        if isinstance(x, float):
            return float(fmt(x))
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return x

    return json.dumps(clean(payload), indent=2) + "\n"


def _state_arg(args) -> QState:
    if getattr(args, "state", None):
        return load_state(args.state)
    if getattr(args, "p", None) is not None:
        return werner(args.p)
    return singlet()


# --------------------------------------------------------------------------- commands


def cmd_reproduce(args) -> tuple[str, int]:
    rep = reproduce_all()
    if args.format == "json":
        out = _json(rep.to_dict())
    else:
        header = ("scenario", "b_cl1", "b_cr", "violated_l1", "violated_r", "chsh")
        rows = [(r.scenario, r.b_cl1, r.b_cr, r.violated_l1, r.violated_r,
                 r.chsh if r.chsh is not None else "") for r in rep.rows]
        out = _table(header, rows) if args.format == "table" else _csv(header, rows)
        if args.format == "table":
            out += "\n" + _table(("check", "expected", "actual", "delta", "status"),
                                 [(c.name, c.expected, c.actual, c.delta, "ok" if c.passed else "FAIL")
                                  for c in rep.checks])
            out += f"\n{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks passed\n"
    for c in rep.failures:
        print(f"reproduction mismatch: {c.name}: expected {c.expected}, got {c.actual} "
              f"(delta {c.delta:.3g}, tol {c.tol:g})", file=sys.stderr)
    return out, 0 if rep.passed else 1


def _measure_cols(measure: str) -> list[str]:
    return {"l1": ["b_cl1", "violated_l1"], "rel-ent": ["b_cr", "violated_r"],
            "both": ["b_cl1", "b_cr", "violated_l1", "violated_r"]}[measure]


def cmd_sweep_werner(args) -> tuple[str, int]:
    grid = [args.p] if args.p is not None else werner_grid(args.points)
    records = werner_sweep(grid, threads=thread_count(args.threads))
    if args.format == "csv":
        return werner_csv(records), 0
    if args.format == "json":
        return records_json(records), 0
    cols = _measure_cols(args.measure)
    rows = []
    for r in records:
        vals = {"b_cl1": r.b_cl1_value, "b_cr": r.b_cr_value,
                "violated_l1": r.violated_l1, "violated_r": r.violated_r}
        rows.append([r.params["p"]] + [vals[c] for c in cols])
    out = _table(["p"] + cols, rows)
    out += f"\nB_Cr root (bisection): p = {fmt(werner_rel_ent_root(), 9)}; B_Cl1 crossing: p = 0.25\n"
    return out, 0


def cmd_sweep_pure(args) -> tuple[str, int]:
    thetas = np.linspace(0.0, math.pi, args.points)
    records = pure_sweep(thetas, args.phi)
    if args.format == "csv":
        return witness_csv(records), 0
    if args.format == "json":
        return records_json(records), 0
    rows = [(r.params["theta"], r.params["phi"], r.b_cl1_value, r.b_cr_value, r.violated_r) for r in records]
    return _table(("theta", "phi", "b_cl1", "b_cr", "detected"), rows), 0


def cmd_witness(args) -> tuple[str, int]:
    if args.theta is None:
        raise UsageError("witness requires --theta")
    v = witness_evaluate(args.theta, args.phi)
    l1 = witness_l1_value(args.theta, args.phi)
    row = (v.theta, v.phi, l1, v.b_cr_value, v.entangled_detected)
    header = ("theta", "phi", "b_cl1", "b_cr", "detected")
    if args.format == "json":
        return _json(dict(zip(header, row))), 0
    if args.format == "csv":
        return _csv(header, [row]), 0
    return _table(header, [row]), 0


def cmd_optimize(args) -> tuple[str, int]:
    rho = _state_arg(args)
    names = {"l1": ["l1"], "rel-ent": ["rel-ent"], "both": ["l1", "rel-ent"], "chsh": ["chsh"],
             "all": ["l1", "rel-ent", "chsh"]}[args.measure]
    results = []
    for name in names:
        fn = Functional.parse(name)
        res = maximize(rho, fn, restarts=args.restarts, seed=args.seed, threads=thread_count(args.threads))
        if args.refine:
            res = grid_refine(rho, fn, res)
        results.append(res)
    if args.format == "json":
        return _json([r.to_dict() for r in results]), 0
    header = ("functional", "best_value", "bound", "restarts", "evaluations", "params")
    rows = [(r.functional.name, r.best_value, r.functional.product_bound, r.restarts_used, r.evaluations,
             " ".join(fmt(x, 6) for x in r.best_params.values)) for r in results]
    return (_csv(header, rows) if args.format == "csv" else _table(header, rows)), 0


def cmd_chsh(args) -> tuple[str, int]:
    rho = _state_arg(args)
    names = list(QUARTETS) if args.quartet == "all" else [args.quartet]
    header = ("quartet", "chsh", "b_cl1", "b_cr", "chsh_violated", "l1_violated", "rel_ent_violated")
    rows = []
    for name in names:
        q = QUARTETS[name]()
        c, l1, re = chsh(rho, q), b_cl1(rho, q), b_cr(rho, q)
        rows.append((name, c.value, l1.value, re.value, c.violated, l1.violated, re.violated))
    if args.format == "json":
        return _json([dict(zip(header, r)) for r in rows]), 0
    return (_csv(header, rows) if args.format == "csv" else _table(header, rows)), 0


# --------------------------------------------------------------------------- parser


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "table"), default=None)
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_nonneg_int, default=None,
                        help="worker threads (default: COHBELL_THREADS, 0 = all cores)")

    parser = argparse.ArgumentParser(prog="cohbell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", parents=[common], help="re-derive every worked example")
    p.set_defaults(func=cmd_reproduce, default_format="table")

    p = sub.add_parser("sweep-werner", parents=[common], help="Werner-state sweep, Example-2 bases")
    p.add_argument("--points", type=_pos_int, default=201)
    p.add_argument("--p", type=float, default=None, help="evaluate a single noise level")
    p.add_argument("--measure", choices=("l1", "rel-ent", "both"), default="both")
    p.set_defaults(func=cmd_sweep_werner, default_format="csv")

    p = sub.add_parser("sweep-pure", parents=[common], help="witness family over theta")
    p.add_argument("--points", type=_pos_int, default=181)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--measure", choices=("l1", "rel-ent", "both"), default="both")
    p.set_defaults(func=cmd_sweep_pure, default_format="csv")

    p = sub.add_parser("witness", parents=[common], help="evaluate the witness at one pure state")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--phi", type=float, default=0.0)
    p.set_defaults(func=cmd_witness, default_format="table")

    p = sub.add_parser("optimize", parents=[common], help="search local bases for maximal violation")
    p.add_argument("--measure", choices=("l1", "rel-ent", "both", "chsh", "all"), default="both")
    p.add_argument("--restarts", type=_pos_int, default=64)
    p.add_argument("--state", metavar="FILE", help="density-matrix JSON (default: singlet)")
    p.add_argument("--p", type=float, default=None, help="use the Werner state with this noise level")
    p.add_argument("--refine", action="store_true", help="finish with a local grid search")
    p.set_defaults(func=cmd_optimize, default_format="table")

    p = sub.add_parser("chsh", parents=[common], help="compare CHSH with the coherence functionals")
    p.add_argument("--quartet", choices=("all",) + tuple(QUARTETS), default="all")
    p.add_argument("--state", metavar="FILE", help="density-matrix JSON (default: singlet)")
    p.add_argument("--p", type=float, default=None, help="use the Werner state with this noise level")
    p.set_defaults(func=cmd_chsh, default_format="table")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        out, code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cohbell: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cohbell: error: cannot read {exc.filename}", file=sys.stderr)
        return 2
    except CohBellError as exc:
        print(f"cohbell: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
