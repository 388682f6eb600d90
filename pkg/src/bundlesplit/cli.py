"""Command-line interface.

Exit codes: 0 success, 1 verification failure (or no fair plan found),
2 malformed input, 3 budget or work limit exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from .adversary import random_instance, tight_instance
from .bounds import bounds_table, guarantee_main, guarantee_pow2, guarantee_two, is_power_of_two
from .compose import smallest_prime_factor, solve, solve_pow2, solve_product
from .core import Instance, dump_allocation, dump_instance, format_fraction, load_allocation, load_instance, to_fraction, verify
from .errors import BudgetExceededError, EmptyInstanceError, MalformedInputError, ShapeMismatchError, SplitError, WorkLimitError
from .oracle import WORK_LIMIT, oracle_optimal, probe_conjecture
from .solver_prime import is_prime, solve_prime_instance
from .solver_two import solve_two, solve_two_m2

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
METHODS = ("auto", "two", "two-m2", "prime", "pow2", "product")


def _run_method(instance: Instance, r: int, method: str, force: bool):
    """Allocation plus the guarantee that applies to the chosen method."""
    n, m = instance.n, instance.m
    if method == "auto":
        return solve(instance, r, force=force), guarantee_main(n, m, r)
    if method in ("two", "two-m2"):
        if r != 2:
            raise MalformedInputError(f"method {method} needs --children 2")
        alloc = solve_two(instance) if method == "two" else solve_two_m2(instance)
        return alloc, guarantee_two(n, m)
    if method == "prime":
        if not is_prime(r):
            raise MalformedInputError(f"method prime needs a prime --children, got {r}")
        return solve_prime_instance(instance, r, force=force), guarantee_main(n, m, r)
    if method == "pow2":
        if not is_power_of_two(r) or r < 2:
            raise MalformedInputError(f"method pow2 needs a power of two --children, got {r}")
        return solve_pow2(instance, r), guarantee_pow2(n, m, r)
    if is_prime(r) or r < 4:
        raise MalformedInputError(f"method product needs a composite --children, got {r}")
    b = smallest_prime_factor(r)
    return solve_product(instance, r // b, b, force=force), guarantee_main(n, m, r)


def _summary(instance: Instance, r: int, report, guarantee: int, method: str) -> str:
    lines = [
        f"agents        {r}",
        f"method        {method}",
        f"fair          {'yes' if report.fair else 'no'}",
        f"strokes       {report.strokes} (budget {(r - 1) * instance.m})",
        f"cookies cut   {report.cookies_cut}",
        f"guarantee     {guarantee}",
        f"full          {' '.join(str(k) for k in report.full_per_agent)}",
        "totals",
    ]
    for a, row in enumerate(report.totals, start=1):
        lines.append(f"  agent {a:<3} " + " ".join(format_fraction(q) for q in row))
    return "\n".join(lines)


def cmd_solve(args) -> int:
    instance = load_instance(args.input)
    if instance.n == 0:
        raise EmptyInstanceError("instance has no cookies")
    r = args.children
    alloc, guarantee = _run_method(instance, r, args.method, args.force)
    report = verify(instance, alloc, r)
    if args.output:
        dump_allocation(alloc, args.output)
        print(_summary(instance, r, report, guarantee, args.method))
    else:
        print(json.dumps(alloc.to_json(), indent=2))
        print(_summary(instance, r, report, guarantee, args.method), file=sys.stderr)
    return EXIT_OK if report.fair else EXIT_FAIL


def cmd_verify(args) -> int:
    instance = load_instance(args.input)
    alloc = load_allocation(args.allocation)
    r = args.children if args.children is not None else alloc.r
    tol = to_fraction(args.tol) if args.tol is not None else None
    report = verify(instance, alloc, r, tol=tol)
    ok = report.fair and report.strokes <= (r - 1) * instance.m
    print(f"fair          {'yes' if report.fair else 'no'}")
    print(f"residual      {format_fraction(report.residual)}")
    if not report.fair and report.worst is not None:
        agent, kind = report.worst
        print(f"worst         agent {agent} kind {kind}")
    print(f"strokes       {report.strokes} (budget {(r - 1) * instance.m})")
    print(f"full          {' '.join(str(k) for k in report.full_per_agent)}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    print(bounds_table(args.n, args.m, args.r).render())
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.input)
    budget = args.budget if args.budget is not None else (args.children - 1) * instance.m
    res = oracle_optimal(instance, args.children, budget, work_limit=args.work_limit)
    if not res.feasible:
        print(f"infeasible with {budget} strokes")
        return EXIT_FAIL
    print(f"best min full {res.best_min_full}")
    print(json.dumps(res.witness.to_json(), indent=2))
    return EXIT_OK


def cmd_probe(args) -> int:
    report = probe_conjecture(args.nmax, args.mmax, args.r, args.trials, seed=args.seed)
    print(json.dumps(report.as_dict(), indent=2))
    return EXIT_OK


def cmd_adversary(args) -> int:
    instance = tight_instance(args.m, args.r, args.n)
    _emit_instance(instance, args.output)
    return EXIT_OK


def cmd_random(args) -> int:
    instance = random_instance(args.n, args.m, random.Random(args.seed))
    _emit_instance(instance, args.output)
    return EXIT_OK


def _emit_instance(instance: Instance, path) -> None:
    if path:
        dump_instance(instance, path)
    else:
        print(json.dumps(instance.to_json(), indent=2))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bundlesplit", description="Fair splitting of frosted cookies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a fair allocation")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--children", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--force", action="store_true", help="ignore the search budget")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an allocation file")
    p.add_argument("--input", required=True)
    p.add_argument("--allocation", required=True)
    p.add_argument("--children", type=int)
    p.add_argument("--tol", help="relative tolerance, e.g. 1/1000000 or 1e-9")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="print the full-cookie guarantees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", help="exhaustive optimum for a small instance")
    p.add_argument("--input", required=True)
    p.add_argument("--children", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--work-limit", type=int, default=WORK_LIMIT)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("probe", help="compare exhaustive optima with the conjectured bound")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--mmax", type=int, default=1)
    p.add_argument("--r", type=int, nargs="+", default=[2])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("adversary", help="write a tight instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("random", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceededError, WorkLimitError) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MalformedInputError, EmptyInstanceError, ShapeMismatchError) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SplitError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, ZeroDivisionError) as exc:
        print(f"MALFORMED_INPUT: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
