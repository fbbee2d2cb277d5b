"""Command line interface: ``jordan-wlcp {solve,classify,degree,path,gen,check}``.

Exit codes: 0 success / converged, 1 solver non-convergence or a failed
check, 2 usage and input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checks import run_checks
from .errors import (
    CapacityError,
    GenerationFailure,
    InvalidInputError,
    JordanWLCPError,
    ParseError,
    ValidationError,
)
from .io import GENERATOR_KINDS, dumps, generate_instance, parse_instance, report_to_dict
from .pairs import MAX_DEGREE_N, hlcp_degree, is_p_pair, is_r0_pair
from .solver import SolverConfig, geometric_schedule, path_trace, solve

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

INPUT_ERRORS = (ParseError, ValidationError, InvalidInputError, CapacityError, GenerationFailure)


class _Usage(Exception):
    pass


def _read_problem(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args) -> SolverConfig:
    return SolverConfig(
        tol=args.tol,
        mu0=args.mu0,
        sigma=args.sigma,
        max_outer=args.max_outer,
        max_inner=args.max_inner,
        starts=args.starts,
        seed=args.seed,
    )


def _require_rn(problem, what: str):
    if problem.algebra.descriptor.kind != "rn":
        raise _Usage(f"{what} is only available for rn instances")


def classify(problem, samples: int = 3, seed: int = 0) -> dict:
    """``{r0, degree, p_pair}``; degree is null unless R0 and n <= 16."""
    a, b = problem.A.matrix, problem.B.matrix
    r0 = bool(is_r0_pair(a, b))
    degree = None
    if r0 and problem.algebra.dim <= MAX_DEGREE_N:
        degree = hlcp_degree(a, b, samples=samples, seed=seed, check_r0=False).degree
    return {"r0": r0, "degree": degree, "p_pair": bool(is_p_pair(a, b))}


def cmd_solve(args) -> int:
    problem = _read_problem(args.instance)
    report = solve(problem, _config(args))
    info = None
    if args.classify:
        _require_rn(problem, "--classify")
        info = classify(problem)
    _emit(dumps(report_to_dict(report, info)), args.out)
    return EXIT_OK if report.converged else EXIT_FAILED


def cmd_classify(args) -> int:
    problem = _read_problem(args.instance)
    _require_rn(problem, "classify")
    _emit(dumps(classify(problem, args.samples, args.seed)), args.out)
    return EXIT_OK


def cmd_degree(args) -> int:
    problem = _read_problem(args.instance)
    _require_rn(problem, "degree")
    rep = hlcp_degree(problem.A.matrix, problem.B.matrix, samples=args.samples, seed=args.seed)
    _emit(dumps(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_path(args) -> int:
    problem = _read_problem(args.instance)
    schedule = geometric_schedule(args.steps, args.ratio)
    trace = path_trace(problem, _config(args), schedule)
    doc = {
        "schedule": list(trace.schedule),
        "levels": [report_to_dict(r) for r in trace.reports],
        "final_unweighted": trace.final_unweighted.to_dict(),
        "limit": report_to_dict(trace.limit),
    }
    _emit(dumps(doc), args.out)
    ok = all(r.converged for r in trace.reports) and trace.limit.converged
    return EXIT_OK if ok else EXIT_FAILED


def cmd_gen(args) -> int:
    _emit(dumps(generate_instance(args.kind, args.n, args.seed)), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    problem = _read_problem(args.instance)
    results = run_checks(problem, seed=args.seed, trials=args.trials)
    _emit("".join(r.line() + "\n" for r in results), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jordan-wlcp",
        description="Solve and analyse weighted horizontal LCPs over Euclidean Jordan algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    defaults = SolverConfig()

    def solver_flags(p):
        p.add_argument("--tol", type=float, default=defaults.tol)
        p.add_argument("--mu0", type=float, default=defaults.mu0)
        p.add_argument("--sigma", type=float, default=defaults.sigma)
        p.add_argument("--max-outer", type=_positive_int, default=defaults.max_outer)
        p.add_argument("--max-inner", type=_positive_int, default=defaults.max_inner)
        p.add_argument("--starts", type=_positive_int, default=defaults.starts)
        p.add_argument("--seed", type=_nonneg_int, default=defaults.seed)

    def common(p, instance=True):
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("solve", help="solve an instance and print a report")
    common(p)
    solver_flags(p)
    p.add_argument("--classify", action="store_true", help="attach R0/degree/P-pair classification")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="R0, degree and P-pair classification (rn only)")
    common(p)
    p.add_argument("--samples", type=_positive_int, default=3)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("degree", help="degree of the pair (rn only)")
    common(p)
    p.add_argument("--samples", type=_positive_int, default=3)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("path", help="solve along t*w for a geometric schedule of t")
    common(p)
    solver_flags(p)
    p.add_argument("--schedule", choices=["geometric"], default="geometric")
    p.add_argument("--steps", type=_nonneg_int, default=12)
    p.add_argument("--ratio", type=float, default=0.5)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("gen", help="emit a seeded random rn instance")
    common(p, instance=False)
    p.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run the invariant suites against an instance")
    common(p)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_positive_int, default=50)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_Usage, *INPUT_ERRORS) as exc:
        print(f"jordan-wlcp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JordanWLCPError as exc:
        print(f"jordan-wlcp {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


run_cli = main
