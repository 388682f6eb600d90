"""Two-agent splitting.

:func:`split_two` pairs the bundles with Gale points and looks for an origin
hyperplane through ``m`` of them that halves every kind after cutting the
bundles it passes through. Bundles off the hyperplane go whole to the side
they lie on, and there are exactly ``n'`` on each side.

:func:`solve_two_m2` is the elementary algorithm for two kinds: pair the
cookies by the first kind, orient the pairs by an alternating sum of the
second, and fix the remainder by cutting the two extreme cookies.
"""
from __future__ import annotations

from fractions import Fraction

from .core import Allocation, Board, Instance, Slice, layout, merge_slices, partition_plan, plan_to_allocation
from .errors import InfeasibleM2Error, NoCandidateError
from .geometry import Option, find_halving, gale_points
from .linalg import box_solve
from .solver_prime import solve_prime

EXHAUSTIVE_LIMIT = 20


def _split_atom(atom, x: Fraction, first: int, second: int, from_left: bool = True) -> list[Slice]:
    """Give ``first`` the fraction ``x`` of an atom (its left end, or its right end)."""
    lo, hi = atom.span
    if from_left:
        mid = lo + x * (hi - lo)
        parts = [(lo, mid, first), (mid, hi, second)]
    else:
        mid = hi - x * (hi - lo)
        parts = [(lo, mid, second), (mid, hi, first)]
    return [Slice(atom.origin, a, b, who) for a, b, who in parts if b > a]


def _whole(atom, agent: int) -> Slice:
    return Slice(atom.origin, atom.span[0], atom.span[1], agent)


def split_two(board: Board) -> list[Slice]:
    """Split a board between agents 1 and 2, cutting at most m bundles.

    Each agent receives at least ``(N - m) / 2`` whole bundles, where ``N`` is
    the bundle count rounded up to the parity of ``m``. Bundles built from
    several atoms are not uniform, so a boundary bundle split at one point
    need not reach every fraction of its frosting; if no hyperplane works
    there, the two-label partition search takes over (it never makes bad cuts,
    so the bound is the same).
    """
    n = board.n_bundles
    if n == 0:
        return []
    T = board.totals()
    live = [j for j in range(board.m) if T[j] > 0]
    bundles = board.bundles()
    atoms = board.atoms
    if not live:
        return [_whole(atoms[i], b % 2 + 1) for b, idx in enumerate(bundles) for i in idx]

    m = len(live)
    N = max(n, m)
    if (N - m) % 2:
        N += 1
    zero = tuple(Fraction(0) for _ in live)

    def vec(frost):
        return tuple(frost[j] for j in live)

    weights, options = [], []
    for b in range(N):
        if b >= n:
            weights.append(zero)
            options.append([Option(zero, zero)])
            continue
        idx = bundles[b]
        frosts = [vec(atoms[i].frosting) for i in idx]
        weights.append(tuple(sum(col, Fraction(0)) for col in zip(*frosts)))
        if len(idx) == 1:
            options.append([Option(zero, frosts[0], ("pre", 0))])
            continue
        opts = []
        for a in range(len(idx)):
            before = tuple(sum(col, Fraction(0)) for col in zip(zero, *frosts[:a]))
            after = tuple(sum(col, Fraction(0)) for col in zip(zero, *frosts[a + 1:]))
            opts.append(Option(before, frosts[a], ("pre", a)))
            opts.append(Option(after, frosts[a], ("suf", a)))
        options.append(opts)

    try:
        halving = find_halving(gale_points((N - m) // 2, m), weights, options)
    except NoCandidateError:
        if board.is_uniform():
            raise
        return partition_plan(board, solve_prime(board, 2))
    cut = dict(zip(halving.subset, zip(halving.options, halving.fractions)))
    plan: list[Slice] = []
    for b in range(n):
        idx = bundles[b]
        if b not in cut:
            agent = 1 if halving.sides[b] > 0 else 2
            plan.extend(_whole(atoms[i], agent) for i in idx)
            continue
        opt_index, x = cut[b]
        kind, a = options[b][opt_index].tag
        for pos, i in enumerate(idx):
            if pos == a:
                plan.extend(_split_atom(atoms[i], x, 1, 2, from_left=(kind == "pre")))
            elif (pos < a) == (kind == "pre"):
                plan.append(_whole(atoms[i], 1))
            else:
                plan.append(_whole(atoms[i], 2))
    return merge_slices(plan)


def solve_two(instance: Instance) -> Allocation:
    """Fair two-way split with at most m cut cookies and floor((n - m)/2) full ones each."""
    if instance.n == 0:
        return Allocation(2, ())
    return plan_to_allocation(split_two(layout(instance)), instance.n, 2)


def solve_two_m2(instance: Instance, stats: dict | None = None) -> Allocation:
    """Two agents, two kinds: cut only the top cookie of each kind.

    ``stats`` (if given) receives ``flips`` (greedy reorientations tried) and
    ``exhaustive`` (whether the full orientation search was needed).
    """
    if instance.m != 2:
        raise ValueError("solve_two_m2 needs exactly two kinds")
    n = instance.n
    if n == 0:
        return Allocation(2, ())
    cookies = list(instance.cookies)
    if n % 2:
        cookies.append((Fraction(0), Fraction(0)))
    N = len(cookies)
    T = instance.totals()
    live = [j for j in range(2) if T[j] > 0]

    c1 = min(range(N), key=lambda i: (-cookies[i][0], i))
    c2 = min((i for i in range(N) if i != c1), key=lambda i: (-cookies[i][1], i))
    rest = sorted((i for i in range(N) if i not in (c1, c2)), key=lambda i: (-cookies[i][0], i))
    pairs = [(rest[2 * k], rest[2 * k + 1]) for k in range(len(rest) // 2)]
    diffs = [cookies[a][1] - cookies[b][1] for a, b in pairs]

    # alternate by the sorted second-kind differences: c_1 - c_2 + c_3 - ...
    by_diff = sorted(range(len(pairs)), key=lambda k: (-diffs[k], k))
    orient = [True] * len(pairs)  # True: agent 1 takes the first cookie of the pair
    for rank_, k in enumerate(by_diff):
        orient[k] = rank_ % 2 == 0

    def attempt(orient):
        got = [Fraction(0), Fraction(0)]
        for (a, b), first in zip(pairs, orient):
            for j in range(2):
                got[j] += cookies[a if first else b][j]
        rows = [[cookies[c1][j], cookies[c2][j]] for j in live]
        rhs = [T[j] / 2 - got[j] for j in live]
        if not rows:
            return (Fraction(0), Fraction(0))
        x = box_solve(rows, rhs, [Fraction(0)] * 2, [Fraction(1)] * 2)
        return None if x is None else tuple(x)

    flips = 0
    exhaustive = False
    sol = attempt(orient)
    if sol is None:
        for k in sorted(range(len(pairs)), key=lambda k: (-abs(diffs[k]), k)):
            orient[k] = not orient[k]
            flips += 1
            sol = attempt(orient)
            if sol is not None:
                break
    if sol is None and len(pairs) <= EXHAUSTIVE_LIMIT:
        exhaustive = True
        for mask in range(1 << len(pairs)):
            trial = [not bool(mask >> k & 1) for k in range(len(pairs))]
            sol = attempt(trial)
            if sol is not None:
                orient = trial
                break
    if stats is not None:
        stats["flips"] = flips
        stats["exhaustive"] = exhaustive
    if sol is None:
        raise InfeasibleM2Error("no pair orientation lets the two extreme cookies balance both kinds")

    alpha, beta = sol
    plan = []
    for c, x in ((c1, alpha), (c2, beta)):
        if x > 0:
            plan.append(Slice(c, Fraction(0), x, 1))
        if x < 1:
            plan.append(Slice(c, x, Fraction(1), 2))
    for (a, b), first in zip(pairs, orient):
        plan.append(Slice(a, Fraction(0), Fraction(1), 1 if first else 2))
        plan.append(Slice(b, Fraction(0), Fraction(1), 2 if first else 1))
    return plan_to_allocation(plan, n, 2)
