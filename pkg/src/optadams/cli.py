"""Command-line front end.

Subcommands: ``coeffs`` (coefficient reports), ``norm`` (dual-norm report),
``integrate`` (single trajectory as CSV), ``bench`` (comparison tables),
``verify`` (embedded identity suite).  Exit codes: 0 success, 1 runtime
failure, 2 usage error.  Nothing is written to disk unless ``--out`` is
given.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import bench, error_norm, verify
from .coefficients import FormulaKind, closed_form, closed_form_report, solve_optimal
from .dense_solver import SingularMatrixError
from .stepping import (
    SCHEMES,
    ImplicitSolveConfig,
    NoConvergenceError,
    NonFiniteStateError,
    SolveStrategy,
    integrate,
    trajectory_csv,
)

_PROBLEM_NAMES = [p.name for p in bench.builtin_problems()]
_SCHEME_NAMES = sorted(SCHEMES)


def _add_step_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kind", required=True, choices=["explicit", "implicit"])
    sub.add_argument("--k", required=True, type=int, help="step count (>= 1)")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", type=float, help="grid step in (0, 1]")
    group.add_argument("--n", type=int, help="number of grid pieces; h = 1/N")


def _add_out(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write output to PATH instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optadams",
        description=(
            "Optimal exponentially fitted difference formulas: derive "
            "coefficients, evaluate error-functional norms, integrate "
            "initial-value problems, and benchmark against Euler/trapezoid."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="derive a coefficient set")
    _add_step_args(p)
    p.add_argument(
        "--method",
        choices=["closed", "solve"],
        default="closed",
        help="closed form or the dense stationarity system",
    )
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _add_out(p)

    p = sub.add_parser("norm", help="dual-norm report (quadratic form vs closed form)")
    _add_step_args(p)
    _add_out(p)

    p = sub.add_parser("integrate", help="run one scheme on one problem")
    p.add_argument("--problem", required=True, choices=_PROBLEM_NAMES)
    p.add_argument("--scheme", required=True, choices=_SCHEME_NAMES)
    p.add_argument("--n", required=True, type=int, help="number of steps")
    p.add_argument("--tol", type=float, default=1e-13, help="implicit solve tolerance")
    p.add_argument(
        "--strategy",
        choices=[s.value for s in SolveStrategy],
        default=SolveStrategy.NEWTON_FALLBACK.value,
    )
    _add_out(p)

    p = sub.add_parser("bench", help="comparison tables over the problem registry")
    p.add_argument(
        "--problems",
        default=",".join(_PROBLEM_NAMES),
        help=f"comma list from {_PROBLEM_NAMES}",
    )
    p.add_argument(
        "--schemes",
        default=",".join(_SCHEME_NAMES),
        help=f"comma list from {_SCHEME_NAMES}",
    )
    p.add_argument(
        "--grids",
        default=",".join(str(n) for n in bench.DEFAULT_GRIDS),
        help="comma list of step counts",
    )
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument(
        "--eoc",
        action="store_true",
        help="emit convergence orders over the grid list instead of node tables",
    )
    p.add_argument("--tol", type=float, default=1e-13)
    _add_out(p)

    p = sub.add_parser("verify", help="run the embedded identity suite")
    p.add_argument("--seed", type=int, default=20260810)
    _add_out(p)

    return parser


def _grid_step(args: argparse.Namespace, parser: argparse.ArgumentParser) -> float:
    if args.h is not None:
        return args.h
    if args.n < 1:
        parser.error("--n must be >= 1")
    return 1.0 / args.n


def _coeffs_text(args: argparse.Namespace, h: float) -> str:
    kind = FormulaKind(args.kind)
    if args.method == "solve":
        report = solve_optimal(kind, args.k, h)
    else:
        report = closed_form_report(kind, args.k, h)
    if args.format == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    data = report.to_dict()
    lines = ["name,value"]
    for key in ("kind", "k", "h"):
        lines.append(f"{key},{data[key]}")
    for i, v in enumerate(data["c"]):
        lines.append(f"c[{i}],{v!r}")
    for i, v in enumerate(data["c1"]):
        lines.append(f"c1[{i}],{v!r}")
    for key in ("d", "d_plus", "d_minus", "residual"):
        lines.append(f"{key},{data[key]!r}")
    return "\n".join(lines) + "\n"


def _norm_text(args: argparse.Namespace, h: float) -> str:
    kind = FormulaKind(args.kind)
    quadratic = error_norm.norm_sq_quadratic(closed_form(kind, args.k, h))
    closed = error_norm.norm_sq_closed(kind, h)
    header = "kind,k,h,norm_sq_quadratic,norm_sq_closed,abs_difference"
    row = (
        f"{kind.value},{args.k},{h!r},{quadratic!r},{closed!r},"
        f"{abs(quadratic - closed)!r}"
    )
    return header + "\n" + row + "\n"


def _integrate_text(args: argparse.Namespace) -> str:
    problem = bench.get_problem(args.problem)
    cfg = ImplicitSolveConfig(
        tolerance=args.tol, strategy=SolveStrategy(args.strategy)
    )
    trajectory = integrate(problem, args.scheme, args.n, cfg)
    return trajectory_csv(trajectory, problem)


def _bench_text(args: argparse.Namespace, parser: argparse.ArgumentParser) -> str:
    problems = [name.strip() for name in args.problems.split(",") if name.strip()]
    schemes = [name.strip() for name in args.schemes.split(",") if name.strip()]
    try:
        grids = sorted({int(token) for token in args.grids.split(",") if token.strip()})
    except ValueError:
        parser.error(f"--grids must be a comma list of integers, got {args.grids!r}")
    for name in problems:
        if name not in _PROBLEM_NAMES:
            parser.error(f"unknown problem {name!r}; available: {_PROBLEM_NAMES}")
    for name in schemes:
        if name not in _SCHEME_NAMES:
            parser.error(f"unknown scheme {name!r}; available: {_SCHEME_NAMES}")
    if not problems or not schemes or not grids:
        parser.error("--problems, --schemes and --grids must be nonempty")
    if args.eoc and len(grids) < 2:
        parser.error("--eoc needs at least two grid entries")

    cfg = ImplicitSolveConfig(tolerance=args.tol)
    references: dict[str, object] = {}
    tables = []
    for problem_name in sorted(problems):
        problem = bench.get_problem(problem_name)
        reference = None
        if problem.exact is None:
            if problem_name not in references:
                references[problem_name] = bench.reference_trajectory(problem)
            reference = references[problem_name]
        for scheme in sorted(schemes):
            if args.eoc:
                tables.append(bench.eoc(problem, scheme, grids, cfg, reference))
            else:
                for n in grids:
                    tables.append(bench.run_case(problem, scheme, n, cfg, reference))
    return bench.emit(tables, args.format)


def _verify_text(args: argparse.Namespace) -> tuple[str, bool]:
    results = verify.run_all(seed=args.seed)
    lines = [
        f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}" for r in results
    ]
    return "\n".join(lines) + "\n", all(r.passed for r in results)


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "coeffs":
            text = _coeffs_text(args, _grid_step(args, parser))
        elif args.command == "norm":
            text = _norm_text(args, _grid_step(args, parser))
        elif args.command == "integrate":
            text = _integrate_text(args)
        elif args.command == "bench":
            text = _bench_text(args, parser)
        else:
            text, ok = _verify_text(args)
            _write(text, args.out)
            return 0 if ok else 1
    except (NoConvergenceError, NonFiniteStateError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(text, args.out)
    return 0


def console_main() -> None:
    raise SystemExit(main())
