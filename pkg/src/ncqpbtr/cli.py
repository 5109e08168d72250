"""Command line front end.

Exit codes: 0 success, 1 check/compare negative, 2 unreadable input,
3 infeasible or bad parameters, 4 numerical failure, 5 phase-2 entry
condition violated, 6 dimension too large for the grid oracle.
"""

import argparse
import logging
import os
import sys

from .errors import (
    DimensionTooLarge,
    EntryConditionViolated,
    NotPositiveDefinite,
    NumericalFailure,
    ProblemError,
)
from .fileio import ParseError, dumps, read_problem, solution_to_dict, trace_rows, write_problem, write_trace
from .generator import GenParams, generate
from .oracle import GridSpec, grid_refine_min, grid_resolution
from .problem import check_psi_convexity, eval_Phi, validate
from .solver import compute_tau0, phase1_tolerance, problem_size, solve

EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_PROBLEM = 3
EXIT_NUMERICAL = 4
EXIT_ENTRY = 5
EXIT_DIMENSION = 6

log = logging.getLogger("ncqpbtr")


def _threads():
    raw = os.environ.get("NCQPBTR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def _run(fn, args):
    try:
        return fn(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, exc)
    except ProblemError as exc:
        return _fail(EXIT_PROBLEM, exc)
    except (NumericalFailure, NotPositiveDefinite) as exc:
        where = f" in phase {exc.phase}" if exc.phase else ""
        return _fail(EXIT_NUMERICAL, f"numerical failure{where}: {exc}")
    except EntryConditionViolated as exc:
        return _fail(EXIT_ENTRY, exc)
    except DimensionTooLarge as exc:
        return _fail(EXIT_DIMENSION, exc)


def _load(path):
    try:
        return read_problem(path)
    except ProblemError as exc:
        raise ParseError(f"malformed problem in {path}: {exc}") from exc


def cmd_solve(args):
    spec = _load(args.input)
    sol, trace = solve(spec, args.tol, threads=_threads())
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps(solution_to_dict(sol, trace, spec)))
    if args.trace:
        write_trace(trace_rows(trace), args.trace)
    for w in trace.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_generate(args):
    params = GenParams(n=args.n, seed=args.seed, q_min_eig=args.q_min_eig, box_scale=args.box_scale,
                       delta=args.delta, tau_F=args.tau_F, pi_F=args.pi_F, tightness=args.tightness)
    write_problem(generate(params), args.out)
    return 0


def cmd_check(args):
    spec = _load(args.input)
    geometry = validate(spec)
    status = check_psi_convexity(spec, geometry)
    print(f"n: {spec.n}")
    print(f"shortest_side: {geometry.shortest_side!r}")
    print(f"psi_convexity: {status.value}")
    print(f"barrier_weight: {4 * spec.n}")
    print(f"tau0: {compute_tau0(spec)!r}")
    print(f"phase1_eps: {phase1_tolerance(geometry, spec)!r}")
    print(f"L: {problem_size(spec, geometry, args.tol)!r}")
    return 0 if status.value == "Certified" else EXIT_NEGATIVE


def cmd_oracle_compare(args):
    spec = _load(args.input)
    geometry = validate(spec)
    if spec.n > 3:
        raise DimensionTooLarge(f"oracle comparison supports n <= 3, got n = {spec.n}")
    grid = GridSpec(points_per_axis=2001 if spec.n <= 2 else 201)
    sol, _ = solve(spec, args.tol, threads=_threads())
    _, phi_star = grid_refine_min(spec, geometry, grid)
    slack = 10 * grid_resolution(geometry, grid)
    gap = eval_Phi(spec, geometry, sol.x_hat) - phi_star
    print(f"phi_solver: {sol.phi_value!r}")
    print(f"phi_oracle: {phi_star!r}")
    print(f"gap: {gap!r}")
    print(f"allowed: {args.tol + slack!r}")
    return 0 if gap <= args.tol + slack else EXIT_NEGATIVE


def build_parser():
    p = argparse.ArgumentParser(prog="ncqpbtr", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a problem file")
    s.add_argument("input")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--out", required=True)
    s.add_argument("--trace", help="write a per-iteration CSV trace")
    s.set_defaults(fn=cmd_solve)

    g = sub.add_parser("generate", help="write a random problem file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--q-min-eig", type=float, default=GenParams.q_min_eig)
    g.add_argument("--box-scale", type=float, default=GenParams.box_scale)
    g.add_argument("--delta", type=float, default=GenParams.delta)
    g.add_argument("--tau-F", dest="tau_F", type=float, default=GenParams.tau_F)
    g.add_argument("--pi-F", dest="pi_F", type=float, default=GenParams.pi_F)
    g.add_argument("--tightness", type=float, default=GenParams.tightness)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    c = sub.add_parser("check", help="report feasibility and convexity data")
    c.add_argument("input")
    c.add_argument("--tol", type=float, default=1e-6, help="tolerance used for the size measure L")
    c.set_defaults(fn=cmd_check)

    o = sub.add_parser("oracle-compare", help="compare the solver with a grid search (n <= 3)")
    o.add_argument("input")
    o.add_argument("--tol", type=float, default=1e-6)
    o.set_defaults(fn=cmd_oracle_compare)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return _run(args.fn, args)


def entry_point():
    sys.exit(main())
