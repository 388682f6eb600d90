"""Exhaustive search for the best allocation of a small instance.

The search fixes which cookies get cut and which agents share each of them,
then places the remaining cookies whole. Once everything is placed, the cut
fractions are the solution of a small linear feasibility problem, solved
exactly. Meant for n <= 6 and r <= 3.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .adversary import random_instance
from .bounds import guarantee_conjecture
from .core import Allocation, Instance
from .errors import WorkLimitError
from .linalg import feasible_point

WORK_LIMIT = 50_000


@dataclass(frozen=True)
class OracleResult:
    best_min_full: int | None  # None: no fair allocation within the budget
    witness: Allocation | None

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _sharing_patterns(cut: tuple[int, ...], r: int, budget: int):
    groups = [S for k in range(2, r + 1) for S in itertools.combinations(range(1, r + 1), k)]
    for combo in itertools.product(groups, repeat=len(cut)):
        if sum(len(S) - 1 for S in combo) <= budget:
            yield combo


def _fractions(instance, r, cut, sharers, whole_totals):
    """Exact cut fractions making the allocation fair, or ``None``."""
    T = instance.totals()
    m = instance.m
    var = [(c, a) for c, S in zip(cut, sharers) for a in S]
    rows, rhs = [], []
    for k, c in enumerate(cut):
        rows.append([Fraction(1) if v[0] == c else Fraction(0) for v in var])
        rhs.append(Fraction(1))
    for a in range(1, r + 1):
        for j in range(m):
            rows.append([instance.cookies[c][j] if b == a else Fraction(0) for c, b in var])
            rhs.append(T[j] / r - whole_totals[a - 1][j])
    x = feasible_point(rows, rhs, [Fraction(0)] * len(var), [Fraction(1)] * len(var))
    if x is None:
        return None
    return dict(zip(var, x))


def oracle_optimal(
    instance: Instance, r: int, stroke_budget: int, work_limit: int = WORK_LIMIT
) -> OracleResult:
    """Largest achievable minimum number of whole cookies per agent.

    Raises :class:`WorkLimitError` when ``r**n * 2**n`` exceeds ``work_limit``.
    """
    n = instance.n
    if r < 1:
        raise ValueError("r must be positive")
    if r**n * 2**n > work_limit:
        raise WorkLimitError(f"r^n 2^n = {r**n * 2**n} exceeds the work limit {work_limit}")
    if stroke_budget < 0:
        return OracleResult(None, None)
    target = [t / r for t in instance.totals()]
    best: list = [None, None]  # (min_full, allocation)

    for size in range(0, min(n, stroke_budget) + 1):
        if best[0] is not None and (n - size) // r <= best[0]:
            break
        for cut in itertools.combinations(range(n), size):
            whole = [i for i in range(n) if i not in cut]
            if best[0] is not None and len(whole) // r <= best[0]:
                continue
            for sharers in _sharing_patterns(cut, r, stroke_budget):
                _place(instance, r, cut, sharers, whole, target, best)
    return OracleResult(best[0], best[1])


def _place(instance, r, cut, sharers, whole, target, best):
    m = instance.m
    cookies = instance.cookies
    totals = [[Fraction(0)] * m for _ in range(r)]
    counts = [0] * r
    owner = {}

    def dfs(k):
        if k == len(whole):
            low = min(counts)
            if best[0] is not None and low <= best[0]:
                return
            x = _fractions(instance, r, cut, sharers, totals)
            if x is None:
                return
            alloc = _build(instance.n, r, owner, x)
            got = min(alloc.full_per_agent()) if instance.n else 0
            if best[0] is None or got > best[0]:
                best[0], best[1] = got, alloc
            return
        # an agent already behind by more than the remaining cookies cannot beat the incumbent
        if best[0] is not None and min(counts) + (len(whole) - k) <= best[0]:
            return
        c = whole[k]
        agents = [1] if c == 0 else range(1, r + 1)  # agents are interchangeable
        for a in agents:
            row = totals[a - 1]
            if any(row[j] + cookies[c][j] > target[j] for j in range(m)):
                continue
            for j in range(m):
                row[j] += cookies[c][j]
            counts[a - 1] += 1
            owner[c] = a
            dfs(k + 1)
            del owner[c]
            counts[a - 1] -= 1
            for j in range(m):
                row[j] -= cookies[c][j]

    dfs(0)


def _build(n, r, owner, x) -> Allocation:
    shares: list[list] = [[] for _ in range(n)]
    for c, a in owner.items():
        shares[c].append((a, Fraction(1)))
    for (c, a), v in x.items():
        if v > 0:
            shares[c].append((a, v))
    return Allocation(r, tuple(tuple(sorted(s)) for s in shares))


@dataclass
class ProbeReport:
    """Outcome of :func:`probe_conjecture`."""

    trials: int = 0
    violations: list = field(default_factory=list)
    tight: int = 0  # the optimum equals the conjectured bound
    slack: list = field(default_factory=list)  # optimum minus bound per trial

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "violations": [inst.to_json() | {"r": r, "best": b} for inst, r, b in self.violations],
            "tight": self.tight,
            "max_slack": max(self.slack, default=None),
        }


def probe_conjecture(
    n_max: int,
    m_max: int,
    r_set,
    trials: int,
    seed: int = 0,
    extra: list[tuple[Instance, int]] = (),
    work_limit: int = WORK_LIMIT,
) -> ProbeReport:
    """Compare the exhaustive optimum with floor((n - m(r-1))/r) on random instances.

    ``extra`` adds fixed (instance, r) cases, such as tight instances.
    """
    rng = random.Random(seed)
    cases = []
    for _ in range(trials):
        n = rng.randint(0, n_max)
        m = rng.randint(1, m_max)
        r = rng.choice(list(r_set))
        cases.append((random_instance(n, m, rng), r))
    cases.extend(extra)
    report = ProbeReport()
    for inst, r in cases:
        report.trials += 1
        if inst.n == 0:
            continue
        res = oracle_optimal(inst, r, (r - 1) * inst.m, work_limit)
        bound = guarantee_conjecture(inst.n, inst.m, r)
        best = res.best_min_full
        if best is None or best < bound:
            report.violations.append((inst, r, best))
            continue
        report.slack.append(best - max(bound, 0))
        if best == max(bound, 0):
            report.tight += 1
    return report
