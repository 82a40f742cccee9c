"""Command-line front end.

Subcommands: solve, table, surface, verify-transforms, residual.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import evaluation as ev
from .conformable import FracParams
from .errors import FracBurgersError
from .solver import DEFAULT_ORDER, ProblemSpec, partial_sum, solve


def _grid(lo, hi, steps):
    if steps < 1:
        raise SystemExit("grid needs at least one point")
    if steps == 1:
        return [float(lo)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


def _pairs(ps, qs):
    if len(ps) == len(qs):
        return list(zip(ps, qs))
    if len(ps) == 1:
        return [(ps[0], q) for q in qs]
    if len(qs) == 1:
        return [(p, qs[0]) for p in ps]
    raise SystemExit("--p and --q need equal lengths or a single value on one side")


def _problem(args):
    if args.spec:
        return ProblemSpec.load(args.spec), None
    return ev.problem_for(args.example), args.example


def _out(args):
    return open(args.out, "w") if args.out else contextlib.nullcontext(sys.stdout)


def cmd_solve(args):
    spec, _ = _problem(args)
    sol = solve(spec, args.order)
    U, V = partial_sum(sol)
    lines = []
    for n, (u, v) in enumerate(zip(sol.u_components, sol.v_components)):
        lines.append(f"u_{n} = {u}")
        lines.append(f"v_{n} = {v}")
    lines.append(f"terminated_at = {sol.terminated_at}")
    lines.append(f"U_{sol.order} = {U}")
    lines.append(f"V_{sol.order} = {V}")
    print("\n".join(lines))
    if args.out:
        payload = {
            "problem": spec.to_json(),
            "order": sol.order,
            "terminated_at": sol.terminated_at,
            "u": [e.to_json() for e in sol.u_components],
            "v": [e.to_json() for e in sol.v_components],
        }
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


def cmd_table(args):
    if args.spec:
        raise SystemExit("table needs --example (an exact solution is required)")
    params = FracParams(args.p[0], args.q[0])
    degree = None if args.no_time_truncation else "order"
    rows = ev.error_table(
        args.example,
        args.order,
        args.x,
        _grid(args.t_min, args.t_max, args.t_steps),
        params,
        time_degree=degree,
    )
    text = ev.format_table(rows)
    with _out(args) as fh:
        fh.write(text)
    if args.csv:
        ev.write_table_csv(rows, args.csv)
    return 0


def cmd_surface(args):
    if not args.out:
        raise SystemExit("surface needs --out PATH")
    spec, example = _problem(args)
    n = ev.emit_surface(
        example if example is not None else spec,
        _pairs(args.p, args.q),
        _grid(args.x_min, args.x_max, args.x_steps),
        _grid(args.t_min, args.t_max, args.t_steps),
        args.out,
        args.order,
    )
    print(f"wrote {n} rows to {args.out}")
    return 0


def cmd_verify(args):
    rows = ev.verify_transforms()
    with _out(args) as fh:
        fh.write(ev.format_transform_report(rows))
    return 0 if all(r.passed for r in rows) else 1


def cmd_residual(args):
    spec, _ = _problem(args)
    sol = solve(spec, args.order)
    points = [
        (x, t)
        for t in _grid(args.t_min, args.t_max, args.t_steps)
        for x in _grid(args.x_min, args.x_max, args.x_steps)
    ]
    with _out(args) as fh:
        for p, q in _pairs(args.p, args.q):
            res = ev.residual_check(spec, sol, FracParams(p, q), points)
            fh.write(f"p={p:g} q={q:g} order={args.order} max_residual={res:.6e}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--example", type=int, choices=(1, 2), default=1)
    src.add_argument("--spec", help="problem description (JSON)")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER)
    common.add_argument("--p", type=float, nargs="+", default=[1.0])
    common.add_argument("--q", type=float, nargs="+", default=[1.0])
    common.add_argument("--x", type=float, default=1.0)
    common.add_argument("--x-min", type=float, default=0.5)
    common.add_argument("--x-max", type=float, default=2.0)
    common.add_argument("--x-steps", type=int, default=4)
    common.add_argument("--t-min", type=float, default=0.1)
    common.add_argument("--t-max", type=float, default=0.5)
    common.add_argument("--t-steps", type=int, default=9)
    common.add_argument("--out", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="fracburgers",
        description="Conformable double ARA decomposition for coupled Burgers systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="print series components")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", parents=[common], help="error table against the exact solution")
    p.add_argument("--csv", help="also write the table as CSV")
    p.add_argument(
        "--no-time-truncation",
        action="store_true",
        help="use the raw partial sum instead of its degree-N Taylor polynomial in T",
    )
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("surface", parents=[common], help="write solution surfaces as CSV")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("verify-transforms", parents=[common], help="transform table report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("residual", parents=[common], help="numeric PDE residual of the partial sum")
    p.set_defaults(func=cmd_residual)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FracBurgersError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
