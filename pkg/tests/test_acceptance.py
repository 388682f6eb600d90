"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines, or
``python tests/test_acceptance.py`` to run the criteria without pytest.
"""
import random
import sys
import time
from decimal import Decimal
from fractions import Fraction

from bundlesplit.adversary import random_instance, tight_instance
from bundlesplit.bounds import guarantee_conjecture, guarantee_main, guarantee_pow2, guarantee_two, max_bad_cuts
from bundlesplit.compose import solve, solve_pow2
from bundlesplit.core import Allocation, Instance, count_bad_cuts, layout, to_allocation, verify
from bundlesplit.geometry import gale_points, validate_gale
from bundlesplit.oracle import oracle_optimal, probe_conjecture
from bundlesplit.solver_prime import solve_prime
from bundlesplit.solver_two import solve_two


LINES: list[str] = []  # shown in pytest's terminal summary by conftest.py


def _report(number, title, ok, detail, started):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail}; {time.perf_counter() - started:.1f}s)"
    LINES.append(line)
    print(line, flush=True)
    return line


def _exact(instance, alloc, r):
    rep = verify(instance, alloc, r, tol=0)
    return rep, rep.fair and rep.residual == 0


def criterion_1():
    start = time.perf_counter()
    rng = random.Random(101)
    failures = []
    for t in range(500):
        inst = random_instance(rng.randint(1, 40), rng.randint(1, 4), rng)
        rep, fair = _exact(inst, solve_two(inst), 2)
        if not (fair and rep.strokes <= inst.m and min(rep.full_per_agent) >= guarantee_two(inst.n, inst.m)):
            failures.append(t)
    ok = not failures and time.perf_counter() - start < 60
    return ok, _report(1, "two agents, 500 instances", ok, f"{len(failures)} failures", start)


def criterion_2():
    start = time.perf_counter()
    rng = random.Random(202)
    failures = []
    for t in range(200):
        p = rng.choice([2, 3, 5])
        inst = random_instance(rng.randint(1, 12), rng.randint(1, 2), rng)
        board = layout(inst)
        part = solve_prime(board, p)
        rep, fair = _exact(inst, to_allocation(board, part, inst.n), p)
        good = (
            fair
            and rep.strokes <= (p - 1) * inst.m
            and count_bad_cuts(part) <= max_bad_cuts(inst.m, p)
            and min(rep.full_per_agent) >= guarantee_main(inst.n, inst.m, p)
        )
        if not good:
            failures.append(t)
    ok = not failures and time.perf_counter() - start < 600
    return ok, _report(2, "prime agents, 200 instances", ok, f"{len(failures)} failures", start)


def criterion_3():
    start = time.perf_counter()
    rng = random.Random(303)
    failures = []
    runs = 0
    for n in range(1, 21):
        for m in range(1, 4):
            cases = [random_instance(n, m, rng) for _ in range(3)]
            if n >= 3 * m:
                cases.append(tight_instance(m, 4, n))
            for inst in cases:
                runs += 1
                rep, fair = _exact(inst, solve_pow2(inst, 4), 4)
                if not (fair and rep.strokes <= 3 * m and min(rep.full_per_agent) >= guarantee_pow2(n, m, 4)):
                    failures.append((n, m))
    ok = not failures and time.perf_counter() - start < 300
    return ok, _report(3, "four agents, all n<=20, m<=3", ok, f"{runs} runs, {len(failures)} failures", start)


def criterion_4():
    start = time.perf_counter()
    rng = random.Random(404)
    failures = []
    steps = 0
    for t in range(50):
        inst = random_instance(rng.randint(1, 10), 1, rng)
        trace = []
        rep, fair = _exact(inst, solve(inst, 6, trace), 6)
        chain = bool(trace) and all(rec.holds for rec in trace)
        # the first stage leaves every group at least n/b - (b-1)m whole cookies
        chain = chain and all(min(rec.group_full) >= Fraction(rec.n, rec.b) - (rec.b - 1) * rec.m for rec in trace)
        steps += len(trace)
        if not (fair and rep.strokes <= 5 and min(rep.full_per_agent) >= guarantee_main(inst.n, 1, 6) and chain):
            failures.append(t)
    ok = not failures
    return ok, _report(4, "six agents via composition, 50 instances", ok, f"{steps} product steps, {len(failures)} failures", start)


def criterion_5():
    start = time.perf_counter()
    failures = []
    cases = 0
    for m in (1, 2):
        for r in (2, 3):
            budget = (r - 1) * m
            for n in range(budget, 7):
                inst = tight_instance(m, r, n)
                cases += 1
                below = oracle_optimal(inst, r, budget - 1)
                at = oracle_optimal(inst, r, budget)
                if below.feasible or not at.feasible:
                    failures.append((m, r, n))
                elif not _exact(inst, at.witness, r)[1]:
                    failures.append((m, r, n))
    ok = not failures and time.perf_counter() - start < 300
    return ok, _report(5, "tight instances need every stroke", ok, f"{cases} instances, {len(failures)} failures", start)


def criterion_6():
    start = time.perf_counter()
    failures = [(k, m) for k in range(0, 6) for m in range(1, 5) if not validate_gale(gale_points(k, m))]
    ok = not failures and time.perf_counter() - start < 60
    return ok, _report(6, "Gale property for n'<=5, m<=4", ok, f"{len(failures)} failures", start)


def _suite():
    rng = random.Random(707)
    return [(random_instance(rng.randint(1, 6), rng.randint(1, 2), rng), rng.choice([2, 3])) for _ in range(100)]


def criterion_7():
    start = time.perf_counter()
    suite = _suite()
    failures = []
    tight = 0
    for t, (inst, r) in enumerate(suite):
        res = oracle_optimal(inst, r, (r - 1) * inst.m)
        rep, fair = _exact(inst, solve(inst, r), r)
        ours = min(rep.full_per_agent)
        bound = guarantee_main(inst.n, inst.m, r)
        witness_ok = res.feasible and _exact(inst, res.witness, r)[1]
        witness_ok = witness_ok and verify(inst, res.witness, r).strokes <= (r - 1) * inst.m
        if not (fair and witness_ok and ours <= res.best_min_full and ours >= bound and res.best_min_full >= bound):
            failures.append(t)
        tight += res.best_min_full == max(0, guarantee_conjecture(inst.n, inst.m, r))
    probe = probe_conjecture(6, 2, [2, 3], 0, extra=suite)
    ok = not failures
    detail = f"{len(failures)} failures; conjecture violations {len(probe.violations)}, tight {probe.tight}/{probe.trials}"
    return ok, _report(7, "oracle cross-validation on 100 instances", ok, detail, start)


def criterion_8():
    start = time.perf_counter()
    rng = random.Random(808)
    problems = []
    for t in range(40):
        r = rng.choice([2, 3, 4, 5, 6])
        inst = random_instance(rng.randint(1, 9), 1 if r in (5, 6) else rng.randint(1, 2), rng)
        rep, fair = _exact(inst, solve(inst, r), r)
        if not fair:
            problems.append(("exact", t))
    # decimal input: the solvers still answer exactly; only verification may use a tolerance
    dec = Instance.from_json({"m": 2, "cookies": [[Decimal("0.1"), Decimal("0.3")], [Decimal("0.25"), Decimal("0")], [Decimal("1.5"), Decimal("0.7")]]})
    if not dec.decimal_input or dec.default_tol() <= 0:
        problems.append(("decimal flag", None))
    for r in (2, 3):
        if not _exact(dec, solve(dec, r), r)[1]:
            problems.append(("decimal exact", r))
    eps = Fraction(1, 10**13)
    nudged = Allocation(2, (((1, Fraction(1)),), ((1, eps), (2, 1 - eps)), ((2, Fraction(1)),)))
    base = Instance.from_json({"m": 1, "cookies": [[Decimal("0.5")], [Decimal("0.2")], [Decimal("0.5")]]})
    half = Allocation(2, (((1, Fraction(1)),), ((1, Fraction(1, 2)), (2, Fraction(1, 2))), ((2, Fraction(1)),)))
    if not verify(base, half, 2, tol=0).fair:
        problems.append(("decimal baseline", None))
    if verify(base, nudged, 2, tol=0).fair or verify(base, nudged, 2).fair:
        problems.append(("tolerance too loose", None))
    near = Allocation(2, (((1, Fraction(1)),), ((1, Fraction(1, 2) + eps), (2, Fraction(1, 2) - eps)), ((2, Fraction(1)),)))
    if verify(base, near, 2, tol=0).fair or not verify(base, near, 2).fair:
        problems.append(("tolerance path", None))
    ok = not problems
    return ok, _report(8, "exact fairness, tolerance only for decimal input", ok, f"{len(problems)} problems", start)


def test_criterion_1():
    assert criterion_1()[0]


def test_criterion_2():
    assert criterion_2()[0]


def test_criterion_3():
    assert criterion_3()[0]


def test_criterion_4():
    assert criterion_4()[0]


def test_criterion_5():
    assert criterion_5()[0]


def test_criterion_6():
    assert criterion_6()[0]


def test_criterion_7():
    assert criterion_7()[0]


def test_criterion_8():
    assert criterion_8()[0]


if __name__ == "__main__":
    results = [c()[0] for c in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)]
    sys.exit(0 if all(results) else 1)
