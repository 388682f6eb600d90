"""Domain types, the interval embedding, and the independent verifier.

Cookies (bundles) carry ``m`` nonnegative rational frosting amounts. Every
solver works on a :class:`Board`: the unit interval tiled by atoms, each atom
a sub-piece of one original cookie with uniform densities. A plain instance
lays out as one atom per cookie; composite bundles (a full cookie with
received pieces appended) are several atoms sharing one bundle index.

Agents are numbered from 1. Cookie and bundle indices are 0-based, so the
residue rule "cookie i with label t goes to agent i + t" becomes
``agent = (bundle + label) % p + 1``.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyInstanceError, MalformedInputError, ShapeMismatchError

PAIR = "PAIR"
SINGLE = "SINGLE"
DECIMAL_TOL = Fraction(1, 10**9)


def to_fraction(value) -> Fraction:
    """Parse an int, a decimal, or an ``"a/b"`` string into an exact Fraction."""
    if isinstance(value, bool):
        raise MalformedInputError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"bad rational {value!r}") from exc
    raise MalformedInputError(f"not a number: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class Instance:
    m: int
    cookies: tuple[tuple[Fraction, ...], ...]
    names: tuple[str, ...] | None = None
    decimal_input: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise MalformedInputError("m must be positive")
        cookies = tuple(tuple(Fraction(q) for q in c) for c in self.cookies)
        for c in cookies:
            if len(c) != self.m:
                raise MalformedInputError(f"cookie {c} does not have {self.m} kinds")
            if any(q < 0 for q in c):
                raise MalformedInputError(f"negative frosting in {c}")
        object.__setattr__(self, "cookies", cookies)
        if self.names is not None and len(self.names) != len(cookies):
            raise MalformedInputError("names length differs from cookie count")

    @classmethod
    def of(cls, cookies: Iterable[Sequence], m: int | None = None) -> "Instance":
        rows = [tuple(to_fraction(q) for q in c) for c in cookies]
        if m is None:
            if not rows:
                raise MalformedInputError("m is required for an empty instance")
            m = len(rows[0])
        return cls(m, tuple(rows))

    @property
    def n(self) -> int:
        return len(self.cookies)

    def totals(self) -> tuple[Fraction, ...]:
        return tuple(sum((c[j] for c in self.cookies), Fraction(0)) for j in range(self.m))

    def default_tol(self) -> Fraction:
        return DECIMAL_TOL if self.decimal_input else Fraction(0)

    def to_json(self) -> dict:
        out = {"m": self.m, "cookies": [[format_fraction(q) for q in c] for c in self.cookies]}
        if self.names is not None:
            out["names"] = list(self.names)
        return out

    @classmethod
    def from_json(cls, data) -> "Instance":
        if not isinstance(data, dict) or "m" not in data or "cookies" not in data:
            raise MalformedInputError('instance must be an object with "m" and "cookies"')
        m = data["m"]
        if not isinstance(m, int) or isinstance(m, bool):
            raise MalformedInputError('"m" must be an integer')
        if not isinstance(data["cookies"], list):
            raise MalformedInputError('"cookies" must be a list')
        decimal_input = False
        rows = []
        for c in data["cookies"]:
            if not isinstance(c, list):
                raise MalformedInputError("each cookie must be a list of amounts")
            for q in c:
                if isinstance(q, (float, Decimal)) or (isinstance(q, str) and "." in q):
                    decimal_input = True
            rows.append(tuple(to_fraction(q) for q in c))
        names = data.get("names")
        return cls(m, tuple(rows), tuple(names) if names is not None else None, decimal_input)


def load_instance(path) -> Instance:
    try:
        data = json.loads(Path(path).read_text(), parse_float=Decimal)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read instance {path}: {exc}") from exc
    return Instance.from_json(data)


def dump_instance(instance: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance.to_json(), indent=1) + "\n")


def pad_empty(instance: Instance, k: int) -> Instance:
    """Append ``k`` all-zero cookies."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return instance
    zero = tuple(Fraction(0) for _ in range(instance.m))
    names = None
    if instance.names is not None:
        names = instance.names + tuple(f"pad{i}" for i in range(k))
    return Instance(instance.m, instance.cookies + (zero,) * k, names, instance.decimal_input)


# ---------------------------------------------------------------------------
# boards


@dataclass(frozen=True)
class Atom:
    origin: int  # original cookie index; negative for padding cookies
    span: tuple[Fraction, Fraction]  # sub-interval of the origin cookie's own [0, 1]
    frosting: tuple[Fraction, ...]
    board_span: tuple[Fraction, Fraction]
    bundle: int

    @property
    def length(self) -> Fraction:
        return self.board_span[1] - self.board_span[0]

    def to_origin(self, x: Fraction) -> Fraction:
        """Map a board coordinate inside this atom to the origin cookie's parameter."""
        a, b = self.board_span
        lo, hi = self.span
        return lo + (x - a) * (hi - lo) / (b - a)


@dataclass(frozen=True)
class Board:
    atoms: tuple[Atom, ...]
    m: int

    @property
    def n_bundles(self) -> int:
        return 1 + max((a.bundle for a in self.atoms), default=-1)

    @property
    def cookie_index(self) -> tuple[int, ...]:
        return tuple(a.origin for a in self.atoms)

    def bundles(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_bundles)]
        for i, a in enumerate(self.atoms):
            out[a.bundle].append(i)
        return out

    def bundle_frosting(self, b: int) -> tuple[Fraction, ...]:
        tot = [Fraction(0)] * self.m
        for a in self.atoms:
            if a.bundle == b:
                for j, q in enumerate(a.frosting):
                    tot[j] += q
        return tuple(tot)

    def totals(self) -> tuple[Fraction, ...]:
        return tuple(sum((a.frosting[j] for a in self.atoms), Fraction(0)) for j in range(self.m))

    def is_uniform(self) -> bool:
        """True when every bundle is a single atom."""
        return len(self.atoms) == self.n_bundles


def layout(instance: Instance) -> Board:
    """Cookie i occupies ``[i/n, (i+1)/n)`` as a single uniform atom."""
    n = instance.n
    if n == 0:
        raise EmptyInstanceError("cannot lay out an empty instance")
    atoms = tuple(
        Atom(i, (Fraction(0), Fraction(1)), c, (Fraction(i, n), Fraction(i + 1, n)), i)
        for i, c in enumerate(instance.cookies)
    )
    return Board(atoms, instance.m)


def build_board(bundles: Sequence[Sequence[tuple[int, Fraction, Fraction, tuple]]], m: int) -> Board:
    """Lay out bundles given as lists of ``(origin, lo, hi, frosting)`` pieces.

    Each bundle gets an equal share of ``[0, 1]``; inside a bundle the atoms
    get board length proportional to their span in the origin cookie.
    """
    k = len(bundles)
    atoms = []
    for b, pieces in enumerate(bundles):
        start = Fraction(b, k)
        width = Fraction(1, k)
        total_span = sum((hi - lo for _, lo, hi, _ in pieces), Fraction(0))
        pos = start
        for idx, (origin, lo, hi, frost) in enumerate(pieces):
            end = start + width if idx == len(pieces) - 1 else pos + width * (hi - lo) / total_span
            atoms.append(Atom(origin, (lo, hi), tuple(frost), (pos, end), b))
            pos = end
    return Board(tuple(atoms), m)


# ---------------------------------------------------------------------------
# partitions and plans


@dataclass(frozen=True)
class LabeledPartition:
    p: int
    cuts: tuple[Fraction, ...]
    labels: tuple[int, ...]
    scheme: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.labels) != len(self.cuts) + 1:
            raise ValueError("labels must have one more entry than cuts")
        if any(not 0 <= t < self.p for t in self.labels):
            raise ValueError("labels must lie in Z_p")
        if any(not 0 <= z <= 1 for z in self.cuts):
            raise ValueError("cuts must lie in [0, 1]")
        if any(a > b for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cuts must be nondecreasing")
        if self.scheme:
            width = sum(2 if f == PAIR else 1 for f in self.scheme)
            if width != len(self.labels):
                raise ValueError("scheme does not match the number of intervals")
            pos = 0
            for f in self.scheme:
                if f == PAIR:
                    x, y = self.labels[pos], self.labels[pos + 1]
                    if (x - y) % self.p not in (0, 1):
                        raise ValueError(f"pair labels ({x}, {y}) violate x - y in {{0, 1}}")
                    pos += 2
                else:
                    pos += 1


@dataclass(frozen=True)
class Slice:
    """A piece ``[lo, hi]`` of an origin cookie's parameter handed to ``agent``."""

    origin: int
    lo: Fraction
    hi: Fraction
    agent: int


Plan = list  # list[Slice]


def partition_plan(board: Board, partition: LabeledPartition) -> list[Slice]:
    """Cut the board at the partition's points and hand each piece out by residue."""
    p = partition.p
    bounds = (Fraction(0),) + tuple(partition.cuts) + (Fraction(1),)
    out: list[Slice] = []
    for atom in board.atoms:
        a, b = atom.board_span
        for k, label in enumerate(partition.labels):
            lo = max(a, bounds[k])
            hi = min(b, bounds[k + 1])
            if hi > lo:
                agent = (atom.bundle + label) % p + 1
                out.append(Slice(atom.origin, atom.to_origin(lo), atom.to_origin(hi), agent))
    return merge_slices(out)


def merge_slices(slices: Iterable[Slice]) -> list[Slice]:
    """Join touching slices of the same cookie that go to the same agent."""
    out: list[Slice] = []
    for s in sorted(slices, key=lambda s: (s.origin < 0, abs(s.origin), s.lo)):
        if out and out[-1].origin == s.origin and out[-1].agent == s.agent and out[-1].hi == s.lo:
            out[-1] = Slice(s.origin, out[-1].lo, s.hi, s.agent)
        else:
            out.append(s)
    return out


def slice_frosting(board: Board, s: Slice) -> tuple[Fraction, ...]:
    """Frosting carried by a slice, read off the board's density for its origin."""
    for atom in board.atoms:
        if atom.origin == s.origin and atom.span[0] <= s.lo and s.hi <= atom.span[1]:
            f = (s.hi - s.lo) / (atom.span[1] - atom.span[0])
            return tuple(q * f for q in atom.frosting)
    raise ValueError(f"slice {s} is not inside any atom")


@dataclass(frozen=True)
class ShareMatrix:
    y: tuple[tuple[Fraction, ...], ...]  # y[u - 1][j]

    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum((row[j] for row in self.y), Fraction(0)) for j in range(len(self.y[0])))


def plan_shares(board: Board, plan: Sequence[Slice], r: int) -> ShareMatrix:
    y = [[Fraction(0)] * board.m for _ in range(r)]
    for s in plan:
        for j, q in enumerate(slice_frosting(board, s)):
            y[s.agent - 1][j] += q
    return ShareMatrix(tuple(tuple(row) for row in y))


def shares(board: Board, partition: LabeledPartition) -> ShareMatrix:
    """Frosting per agent when the board is cut and labeled by ``partition``."""
    if partition.p < 2:
        raise ValueError("p must be at least 2")
    return plan_shares(board, partition_plan(board, partition), partition.p)


# ---------------------------------------------------------------------------
# allocations


@dataclass(frozen=True)
class Allocation:
    r: int
    shares: tuple[tuple[tuple[int, Fraction], ...], ...]

    def __post_init__(self):
        for i, cs in enumerate(self.shares):
            agents = [a for a, _ in cs]
            if len(set(agents)) != len(agents):
                raise ValueError(f"cookie {i} lists an agent twice")
            if any(not 1 <= a <= self.r for a in agents):
                raise ValueError(f"cookie {i} names an agent outside 1..{self.r}")
            if any(f <= 0 or f > 1 for _, f in cs):
                raise ValueError(f"cookie {i} has a fraction outside (0, 1]")
            if sum((f for _, f in cs), Fraction(0)) != 1:
                raise ValueError(f"cookie {i} fractions do not sum to 1")

    @property
    def n(self) -> int:
        return len(self.shares)

    @property
    def strokes(self) -> int:
        return sum(len(cs) - 1 for cs in self.shares)

    @property
    def cookies_cut(self) -> int:
        return sum(1 for cs in self.shares if len(cs) > 1)

    def full_per_agent(self) -> tuple[int, ...]:
        counts = [0] * self.r
        for cs in self.shares:
            if len(cs) == 1:
                counts[cs[0][0] - 1] += 1
        return tuple(counts)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "shares": [[[a, format_fraction(f)] for a, f in cs] for cs in self.shares],
        }

    @classmethod
    def from_json(cls, data) -> "Allocation":
        if not isinstance(data, dict) or "r" not in data or "shares" not in data:
            raise MalformedInputError('allocation must be an object with "r" and "shares"')
        try:
            rows = tuple(
                tuple((int(a), to_fraction(f)) for a, f in cs) for cs in data["shares"]
            )
            return cls(int(data["r"]), rows)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad allocation: {exc}") from exc


def load_allocation(path) -> Allocation:
    try:
        data = json.loads(Path(path).read_text(), parse_float=Decimal)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read allocation {path}: {exc}") from exc
    return Allocation.from_json(data)


def dump_allocation(alloc: Allocation, path) -> None:
    Path(path).write_text(json.dumps(alloc.to_json(), indent=1) + "\n")


def plan_to_allocation(plan: Iterable[Slice], n: int, r: int) -> Allocation:
    """Aggregate slices into per-cookie fractions, dropping padding cookies."""
    acc: list[dict[int, Fraction]] = [defaultdict(Fraction) for _ in range(n)]
    for s in plan:
        if 0 <= s.origin < n and s.hi > s.lo:
            acc[s.origin][s.agent] += s.hi - s.lo
    return Allocation(r, tuple(tuple(sorted(d.items())) for d in acc))


def to_allocation(board: Board, partition: LabeledPartition, n: int | None = None) -> Allocation:
    if n is None:
        n = 1 + max((a.origin for a in board.atoms), default=-1)
    return plan_to_allocation(partition_plan(board, partition), n, partition.p)


def unpad(alloc: Allocation, n: int) -> Allocation:
    """Drop cookies past the first ``n`` (the padding) from an allocation."""
    return Allocation(alloc.r, alloc.shares[:n])


def count_bad_cuts(partition: LabeledPartition) -> int:
    p = partition.p
    lab = partition.labels
    return sum(1 for x, y in zip(lab, lab[1:]) if (x - y) % p not in (0, 1))


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    fair: bool
    residual: Fraction
    worst: tuple[int, int] | None  # (agent, kind) of the largest residual, 1-based
    strokes: int
    cookies_cut: int
    full_per_agent: tuple[int, ...]
    totals: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    bad_cuts: int | None = None

    @property
    def min_full(self) -> int:
        return min(self.full_per_agent, default=0)


def allocation_totals(instance: Instance, alloc: Allocation) -> list[list[Fraction]]:
    y = [[Fraction(0)] * instance.m for _ in range(alloc.r)]
    for cookie, cs in zip(instance.cookies, alloc.shares):
        for agent, f in cs:
            for j, q in enumerate(cookie):
                y[agent - 1][j] += f * q
    return y


def verify(
    instance: Instance,
    alloc: Allocation,
    r: int,
    tol: Fraction | None = None,
    partition: LabeledPartition | None = None,
) -> VerificationReport:
    """Check an allocation against the instance: fairness, strokes, full cookies."""
    if alloc.r != r:
        raise ShapeMismatchError(f"allocation is for {alloc.r} agents, expected {r}")
    if alloc.n != instance.n:
        raise ShapeMismatchError(f"allocation covers {alloc.n} cookies, instance has {instance.n}")
    tol = instance.default_tol() if tol is None else Fraction(tol)
    T = instance.totals()
    y = allocation_totals(instance, alloc)
    fair = True
    worst = None
    residual = Fraction(0)
    for u in range(r):
        for j in range(instance.m):
            d = abs(y[u][j] - T[j] / r)
            if d > tol * max(Fraction(1), T[j]):
                fair = False
            if d > residual:
                residual, worst = d, (u + 1, j + 1)
    return VerificationReport(
        fair=fair,
        residual=residual,
        worst=worst,
        strokes=alloc.strokes,
        cookies_cut=alloc.cookies_cut,
        full_per_agent=alloc.full_per_agent(),
        totals=tuple(tuple(row) for row in y),
        bad_cuts=count_bad_cuts(partition) if partition is not None else None,
    )
