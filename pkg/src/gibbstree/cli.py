"""Command-line interface.

Subcommands: solve (one parameter point), sweep (theta grid to CSV/SVG),
count (closed-form solution tallies), verify (finite-volume consistency
oracle), plot (CSV to SVG).  Exit codes: 0 success, 1 internal failure or
failed verification, 2 parameter regime violation, 3 enumeration budget
exceeded, 64 usage error, 74 file I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .catalog import total_lower_bound
from .errors import (
    BudgetError,
    GibbsTreeError,
    HypothesisError,
    ParameterError,
    SelectorSyntaxError,
)
from .model import ModelParams
from .oracle import build_tree, check_consistency
from .solver import SolverConfig
from .sweep import (
    _rows_for,
    parse_set_spec,
    read_csv,
    run_sweep,
    solve_set,
    write_bifurcation_svg,
    write_csv,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_REGIME = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_IO = 74


class _Parser(argparse.ArgumentParser):
    """argparse with BSD-style usage exit code instead of the default 2."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.format_usage()}{self.prog}: error: {message}\n")


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, required=True, help="number of spin states")
    p.add_argument("--k", type=int, required=True, help="tree branching order")
    p.add_argument("--theta", type=float, default=None,
                   help="interaction weight exp(J/T), in (0, 1)")
    p.add_argument("--coupling", type=float, default=None,
                   help="coupling constant J (alternative to --theta, with --temp)")
    p.add_argument("--temp", type=float, default=None,
                   help="temperature T > 0 (used with --coupling)")


def _params_from(args, parser: argparse.ArgumentParser) -> ModelParams:
    has_theta = args.theta is not None
    has_pair = args.coupling is not None or args.temp is not None
    if has_theta and has_pair:
        parser.error("--theta conflicts with --coupling/--temp")
    if has_theta:
        return ModelParams(q=args.q, k=args.k, theta=args.theta)
    if args.coupling is None or args.temp is None:
        parser.error("provide either --theta or both --coupling and --temp")
    if args.temp <= 0.0:
        parser.error("--temp must be positive")
    theta = math.exp(args.coupling / args.temp)
    return ModelParams(q=args.q, k=args.k, theta=theta,
                       j_coupling=args.coupling, beta=1.0 / args.temp)


def _solver_config(args) -> SolverConfig | None:
    if getattr(args, "grid", None) is None:
        return None
    return SolverConfig(grid_points=args.grid)


def _row_dict(r) -> dict:
    return {
        "theta": r.theta, "set_kind": r.set_kind, "m": r.m,
        "sol_index": r.sol_index, "x": r.x, "y": r.y, "z": r.z, "t": r.t,
        "classification": r.classification, "residual_full": r.residual_full,
    }


def _print_rows(rows) -> None:
    print(f"{'set':<10} {'idx':>3} {'x':>18} {'y':>18} "
          f"{'z':>14} {'t':>14} {'class':<5} {'residual':>10}")
    for r in rows:
        z = f"{r.z:.8g}" if r.z is not None else "-"
        t = f"{r.t:.8g}" if r.t is not None else "-"
        print(f"{r.set_kind + ':' + str(r.m):<10} {r.sol_index:>3} "
              f"{r.x:>18.12g} {r.y:>18.12g} {z:>14} {t:>14} "
              f"{r.classification:<5} {r.residual_full:>10.2e}")


def cmd_solve(args, parser) -> int:
    params = _params_from(args, parser)
    config = _solver_config(args)
    rows = []
    for set_id in parse_set_spec(args.set, args.q):
        rows.extend(_rows_for(params, set_id, config))
    if args.out:
        write_csv(rows, args.out)
    if args.json:
        print(json.dumps([_row_dict(r) for r in rows], indent=2))
    else:
        print(f"q={params.q} k={params.k} theta={params.theta:.12g}")
        _print_rows(rows)
        print(f"{len(rows)} solution(s)")
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    set_ids = parse_set_spec(args.set, args.q)
    rows = run_sweep(args.q, args.k, args.theta_min, args.theta_max,
                     args.steps, set_ids, _solver_config(args))
    write_csv(rows, args.out)
    if args.svg:
        write_bifurcation_svg(rows, args.svg)
    if args.json:
        print(json.dumps({"rows": len(rows), "out": args.out, "svg": args.svg}))
    else:
        print(f"wrote {len(rows)} rows to {args.out}")
        if args.svg:
            print(f"wrote plot to {args.svg}")
    return EXIT_OK


def cmd_count(args, parser) -> int:
    report = total_lower_bound(args.q)
    if args.json:
        print(json.dumps({
            "q": report.q,
            "per_im": {str(m): c for m, c in report.per_im.items()},
            "per_im_prime": {str(m): c for m, c in report.per_im_prime.items()},
            "total": report.total,
        }, indent=2))
        return EXIT_OK
    print(f"q={report.q}")
    for m, c in sorted(report.per_im.items()):
        print(f"  im m={m}: {c}")
    for m, c in sorted(report.per_im_prime.items()):
        print(f"  imprime m={m}: {c}")
    print(f"total: {report.total}")
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    params = _params_from(args, parser)
    config = _solver_config(args)
    tree = build_tree(params.k, args.depth)
    all_passed = True
    results = []
    for set_id in parse_set_spec(args.set, args.q):
        for i, sol in enumerate(solve_set(params, set_id, config)):
            report = check_consistency(tree, params, sol.full_field,
                                       tol=args.tol, seed=args.seed)
            results.append((set_id.label(), i, report))
            all_passed &= report.passed
    if args.json:
        print(json.dumps([{
            "set": label, "sol_index": i, "passed": rep.passed,
            "max_relative_error": rep.max_relative_error,
            "pairs_checked": rep.pairs_checked, "depth": rep.n,
        } for label, i, rep in results], indent=2))
    else:
        for label, i, rep in results:
            status = "PASS" if rep.passed else "FAIL"
            print(f"{label} sol {i}: {status} "
                  f"(max relative error {rep.max_relative_error:.3e}, "
                  f"{rep.pairs_checked} configurations, depth {rep.n})")
        print(f"{len(results)} solution(s) checked")
    return EXIT_OK if all_passed else EXIT_INTERNAL


def cmd_plot(args, parser) -> int:
    rows = read_csv(args.csv)
    write_bifurcation_svg(rows, args.out)
    if args.json:
        print(json.dumps({"rows": len(rows), "out": args.out}))
    else:
        print(f"wrote plot to {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbstree",
                     description="Boundary-field solutions of the antiferromagnetic "
                                 "q-state model on a Cayley tree")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_solve = sub.add_parser("solve", help="solve one parameter point")
    _add_model_args(p_solve)
    p_solve.add_argument("--set", default="all",
                         help="invariant set: im:<m>, imprime:<m>, or all")
    p_solve.add_argument("--grid", type=int, default=None, help="scan grid points")
    p_solve.add_argument("--out", default=None, help="also write solutions as CSV")
    p_solve.add_argument("--json", action="store_true", help="machine-readable output")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="solve across a theta grid, write CSV")
    p_sweep.add_argument("--q", type=int, required=True)
    p_sweep.add_argument("--k", type=int, required=True)
    p_sweep.add_argument("--theta-min", type=float, required=True)
    p_sweep.add_argument("--theta-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--set", default="all")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--svg", default=None, help="optional SVG plot path")
    p_sweep.add_argument("--grid", type=int, default=None)
    p_sweep.add_argument("--json", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_count = sub.add_parser("count", help="closed-form solution tallies")
    p_count.add_argument("--q", type=int, required=True)
    p_count.add_argument("--json", action="store_true")
    p_count.set_defaults(func=cmd_count)

    p_verify = sub.add_parser("verify",
                              help="check solutions against finite-volume sums")
    _add_model_args(p_verify)
    p_verify.add_argument("--set", default="all")
    p_verify.add_argument("--depth", type=int, default=2,
                          help="ball depth for the enumeration (default 2)")
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--grid", type=int, default=None)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_plot = sub.add_parser("plot", help="render a sweep CSV as SVG")
    p_plot.add_argument("--csv", required=True, help="input CSV path")
    p_plot.add_argument("--out", required=True, help="output SVG path")
    p_plot.add_argument("--json", action="store_true")
    p_plot.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "func", None) is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except SelectorSyntaxError as exc:
        print(f"gibbstree: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisError, ParameterError) as exc:
        print(f"gibbstree: parameter error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except BudgetError as exc:
        print(f"gibbstree: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"gibbstree: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GibbsTreeError as exc:
        print(f"gibbstree: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
