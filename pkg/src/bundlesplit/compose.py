"""Solving for composite numbers of agents.

The product construction splits ``r = a*b`` agents into ``b`` groups of ``a``.
A first solve hands whole bundles and pieces to the groups; each group then
glues its pieces onto one of its whole bundles (the anchor) and solves for its
``a`` members on the resulting board. Cuts in the second stage that fall on a
piece boundary inside the anchor cost nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import guarantee_main, guarantee_two, is_power_of_two
from .core import (
    Allocation,
    Board,
    Instance,
    Slice,
    build_board,
    layout,
    merge_slices,
    partition_plan,
    plan_to_allocation,
    slice_frosting,
)
from .errors import InvariantViolation
from .solver_prime import is_prime, solve_prime
from .solver_two import split_two


@dataclass(frozen=True)
class ProductRecord:
    """What one product step promised and what it delivered, in board bundles."""

    a: int
    b: int
    n: int
    m: int
    group_full: tuple[int, ...]
    group_bound: int
    child_full: tuple[int, ...]
    child_bound: int
    strokes: int
    stroke_budget: int

    @property
    def holds(self) -> bool:
        return (
            min(self.group_full) >= self.group_bound
            and min(self.child_full) >= self.child_bound
            and self.strokes <= self.stroke_budget
        )


def smallest_prime_factor(r: int) -> int:
    return next(d for d in range(2, r + 1) if r % d == 0)


def bundle_owners(board: Board, plan: list[Slice]) -> list[set[int]]:
    """Agents holding some positive-length part of each bundle."""
    by_origin: dict[int, list[Slice]] = {}
    for s in plan:
        by_origin.setdefault(s.origin, []).append(s)
    owners: list[set[int]] = [set() for _ in range(board.n_bundles)]
    for atom in board.atoms:
        lo, hi = atom.span
        for s in by_origin.get(atom.origin, ()):
            if min(hi, s.hi) > max(lo, s.lo):
                owners[atom.bundle].add(s.agent)
    return owners


def full_counts(board: Board, plan: list[Slice], r: int) -> list[int]:
    counts = [0] * r
    for got in bundle_owners(board, plan):
        if len(got) == 1:
            counts[next(iter(got)) - 1] += 1
    return counts


def plan_strokes(plan: list[Slice]) -> int:
    agents: dict[int, set[int]] = {}
    for s in plan:
        if s.hi > s.lo:
            agents.setdefault(s.origin, set()).add(s.agent)
    return sum(len(v) - 1 for v in agents.values())


def _intervals(pairs) -> list[tuple[Fraction, Fraction]]:
    out: list[list[Fraction]] = []
    for lo, hi in sorted(pairs):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [tuple(x) for x in out]


def check_tiling(board: Board, plan: list[Slice]) -> None:
    """Every origin's slices are disjoint and cover exactly that origin's atoms."""
    want: dict[int, list] = {}
    for atom in board.atoms:
        want.setdefault(atom.origin, []).append(atom.span)
    got: dict[int, list] = {}
    for s in plan:
        if s.hi > s.lo:
            got.setdefault(s.origin, []).append((s.lo, s.hi))
    if set(want) != set(got):
        raise InvariantViolation("plan and board disagree on which cookies exist")
    for origin, spans in got.items():
        spans.sort()
        if any(b[0] < a[1] for a, b in zip(spans, spans[1:])):
            raise InvariantViolation(f"overlapping slices of cookie {origin}")
        if _intervals(spans) != _intervals(want[origin]):
            raise InvariantViolation(f"slices of cookie {origin} do not tile its pieces")


def _whole(board: Board, agent_of_bundle) -> list[Slice]:
    return merge_slices(
        Slice(a.origin, a.span[0], a.span[1], agent_of_bundle(a.bundle)) for a in board.atoms
    )


def _group_boards(board: Board, plan: list[Slice], groups: int) -> list[tuple[Board | None, bool]]:
    """One board per group: whole bundles, with received pieces glued to the anchor.

    The second flag says whether the board ends with a bundle made only of pieces.
    """
    owners = bundle_owners(board, plan)
    bundles = board.bundles()
    frost = [board.bundle_frosting(b) for b in range(board.n_bundles)]
    out = []
    for g in range(1, groups + 1):
        full = [b for b, got in enumerate(owners) if got == {g}]
        cut = {b for b, got in enumerate(owners) if len(got) > 1}
        pieces = []
        for s in plan:
            if s.agent != g or s.hi <= s.lo:
                continue
            for atom in board.atoms:
                if atom.bundle in cut and atom.origin == s.origin:
                    lo, hi = max(atom.span[0], s.lo), min(atom.span[1], s.hi)
                    if hi > lo:
                        piece = Slice(s.origin, lo, hi, g)
                        pieces.append((s.origin, lo, hi, slice_frosting(board, piece)))
        rows = [
            [(board.atoms[i].origin, *board.atoms[i].span, board.atoms[i].frosting) for i in bundles[b]]
            for b in full
        ]
        lonely = False
        if pieces:
            if full:
                anchor = min(range(len(full)), key=lambda i: (-sum(frost[full[i]]), full[i]))
                rows[anchor] = rows[anchor] + pieces
            else:
                rows.append(pieces)
                lonely = True
        out.append((build_board(rows, board.m) if rows else None, lonely))
    return out


def product_board(
    board: Board, a: int, b: int, trace: list | None = None, force: bool = False
) -> list[Slice]:
    """Solve for ``a*b`` agents: ``b`` groups first, then ``a`` agents per group."""
    n, m = board.n_bundles, board.m
    stage1 = solve_board(board, b, trace, force)
    group_full = full_counts(board, stage1, b)
    plan: list[Slice] = []
    child_full = [0] * (a * b)
    for g, (sub, lonely) in enumerate(_group_boards(board, stage1, b), start=1):
        if sub is None:
            continue
        inner = solve_board(sub, a, trace, force)
        counts = full_counts(sub, inner, a)
        if lonely:
            owner = bundle_owners(sub, inner)[-1]
            if len(owner) == 1:
                counts[next(iter(owner)) - 1] -= 1
        for i, c in enumerate(counts):
            child_full[(g - 1) * a + i] = c
        plan.extend(Slice(s.origin, s.lo, s.hi, (g - 1) * a + s.agent) for s in inner)
    plan = merge_slices(plan)
    check_tiling(board, plan)
    record = ProductRecord(
        a=a,
        b=b,
        n=n,
        m=m,
        group_full=tuple(group_full),
        group_bound=guarantee_two(n, m) if b == 2 else guarantee_main(n, m, b),
        child_full=tuple(child_full),
        child_bound=guarantee_main(n, m, a * b),
        strokes=plan_strokes(plan),
        stroke_budget=(a * b - 1) * m,
    )
    if trace is not None:
        trace.append(record)
    if not record.holds:
        raise InvariantViolation(f"product step failed its bounds: {record}")
    return plan


def halve_board(board: Board, r: int, trace: list | None = None, force: bool = False) -> list[Slice]:
    """Repeated halving for ``r`` a power of two."""
    if r == 1:
        return _whole(board, lambda b: 1)
    if r == 2:
        return split_two(board)
    return product_board(board, r // 2, 2, trace, force)


def solve_board(board: Board, r: int, trace: list | None = None, force: bool = False) -> list[Slice]:
    """Fair plan for ``r`` agents on any board (composite bundles allowed)."""
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return _whole(board, lambda b: 1)
    if r == 2:
        return split_two(board)
    if is_prime(r):
        return partition_plan(board, solve_prime(board, r, force=force))
    if is_power_of_two(r):
        return halve_board(board, r, trace, force)
    b = smallest_prime_factor(r)
    return product_board(board, r // b, b, trace, force)


def _pad_board(instance: Instance, x: int) -> Board:
    zero = tuple(Fraction(0) for _ in range(instance.m))
    rows = [[(i, Fraction(0), Fraction(1), c)] for i, c in enumerate(instance.cookies)]
    rows += [[(-1 - k, Fraction(0), Fraction(1), zero)] for k in range(x)]
    return build_board(rows, instance.m)


def solve_pow2(instance: Instance, r: int, trace: list | None = None) -> Allocation:
    """Pad with empty cookies until ``r`` divides ``n + m``, then halve repeatedly."""
    if not is_power_of_two(r):
        raise ValueError(f"r={r} is not a power of two")
    n = instance.n
    x = (-(n + instance.m)) % r
    if n + x == 0:
        return Allocation(r, ())
    plan = halve_board(_pad_board(instance, x), r, trace)
    return plan_to_allocation(plan, n, r)


def solve_product(instance: Instance, a: int, b: int, trace: list | None = None, force: bool = False) -> Allocation:
    """Product construction for ``a*b`` agents; the factors are solved by :func:`solve_board`."""
    if a < 1 or b < 1:
        raise ValueError("factors must be positive")
    if instance.n == 0:
        return Allocation(a * b, ())
    board = layout(instance)
    if b == 1:
        plan = solve_board(board, a, trace, force)
    elif a == 1:
        plan = solve_board(board, b, trace, force)
    else:
        plan = product_board(board, a, b, trace, force)
    return plan_to_allocation(plan, instance.n, a * b)


def solve(instance: Instance, r: int, trace: list | None = None, force: bool = False) -> Allocation:
    """Exactly fair allocation for ``r`` agents with at most ``(r-1)m`` strokes.

    Every agent gets at least ``guarantee_main(n, m, r)`` whole cookies. For
    powers of two the padded halving is tried first; when padding costs an
    agent too many cookies the unpadded halving is used instead.
    """
    if r < 1:
        raise ValueError("r must be positive")
    n = instance.n
    if n == 0:
        return Allocation(r, ())
    if r >= 4 and is_power_of_two(r):
        alloc = solve_pow2(instance, r, trace)
        if min(alloc.full_per_agent()) >= guarantee_main(n, instance.m, r):
            return alloc
    return plan_to_allocation(solve_board(layout(instance), r, trace, force), n, r)

