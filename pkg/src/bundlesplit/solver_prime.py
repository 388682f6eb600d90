"""Fair splitting among a prime number of agents.

A labeled partition of the board with ``s = (p-1)m`` cuts hands interval ``k``
of bundle ``b`` to residue ``(b + L_k) mod p``. Labels come in PAIR factors
(two consecutive intervals whose labels differ by 0 or 1) and, when ``s`` is
even, one trailing SINGLE factor. That structure caps the number of "bad" cuts
(label jumps other than 0 or -1) at ``floor(s/2)``.

Once every cut is pinned to an atom of the board, every share is affine in the
cut positions. Summation by parts gives, for residue ``u`` and kind ``j``::

    y[u][j] = sum_a f[a][j] [b_a + L_s = u]
              + sum_k sum_a dens[a][j] W_a(z_k) ([b_a + L_{k-1} = u] - [b_a + L_k = u])

with ``W_a(z)`` the length of atom ``a`` left of ``z``. The search walks
labelings and cell assignments in lexicographic order, screens whole batches of
the resulting square systems in floating point, and confirms candidates exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import PAIR, SINGLE, Allocation, Board, Instance, LabeledPartition, layout, shares, to_allocation
from .errors import BudgetExceededError, InvariantViolation, SearchExhaustedError
from .linalg import feasible_point, solve_square

SCREEN_TOL = 1e-7
SINGULAR_TOL = 1e-10
CHUNK = 1 << 16
WORK_BUDGET = 5 * 10**7
LABELING_OVERHEAD = 2000  # setting up one labeling costs about this many screened systems


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class LabelingScheme:
    p: int
    m: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m < 0:
            raise ValueError("m must be nonnegative")

    @property
    def s(self) -> int:
        return (self.p - 1) * self.m

    @property
    def factors(self) -> tuple[str, ...]:
        s = self.s
        if s % 2:
            return (PAIR,) * ((s + 1) // 2)
        return (PAIR,) * (s // 2) + (SINGLE,)

    @property
    def n_pairs(self) -> int:
        return self.factors.count(PAIR)

    def count(self) -> int:
        """Size of :func:`enumerate_labelings` (first label fixed)."""
        singles = len(self.factors) - self.n_pairs
        return (2 * self.p) ** self.n_pairs * self.p**singles // self.p

    def canonical_count(self) -> int:
        """Size of :func:`canonical_labelings`."""
        k = self.n_pairs
        if self.s % 2:
            return self.p ** (k - 1)
        if k == 0:
            return 1
        return self.p ** (k - 1) * (self.p - 1)


def _factor_choices(scheme: LabelingScheme, canonical: bool):
    p = scheme.p
    for f in scheme.factors:
        if f == PAIR:
            diffs = (1,) if canonical else (0, 1)
            yield [(x, (x - d) % p) for x in range(p) for d in diffs]
        else:
            yield [(x,) for x in range(p)]


def _labelings(scheme: LabelingScheme, canonical: bool) -> Iterator[tuple[int, ...]]:
    choices = list(_factor_choices(scheme, canonical))
    for combo in itertools.product(*choices):
        labels = tuple(x for part in combo for x in part)
        if labels[0] != 0:
            continue
        if canonical and scheme.factors[-1] == SINGLE and len(labels) > 1 and labels[-1] == labels[-2]:
            continue
        yield labels


def enumerate_labelings(scheme: LabelingScheme) -> Iterator[tuple[int, ...]]:
    """Every label sequence allowed by the scheme with the first label 0, lexicographically."""
    yield from sorted(_labelings(scheme, canonical=False))


def canonical_labelings(scheme: LabelingScheme) -> Iterator[tuple[int, ...]]:
    """The labelings the solver actually searches.

    A pair ``(x, x)`` is the pair ``(x, x-1)`` with an empty second interval, and
    a SINGLE equal to its predecessor is any other SINGLE with an empty last
    interval, so neither adds a partition.
    """
    yield from sorted(_labelings(scheme, canonical=True))


def assignment_count(n_atoms: int, cuts: int) -> int:
    return math.comb(n_atoms + cuts - 1, cuts)


def work_estimate(n_atoms: int, p: int, m: int) -> int:
    scheme = LabelingScheme(p, m)
    return scheme.canonical_count() * (assignment_count(n_atoms, scheme.s) + LABELING_OVERHEAD)


def within_budget(board: Board, p: int, m: int | None = None) -> bool:
    """Worst-case system count at most ``WORK_BUDGET`` (about a minute and a half).

    Covers p <= 5 with m <= 2 and n <= 12, and p = 3 with m = 3 and n <= 12;
    p = 5 with m = 3 is only accepted for a handful of cookies.
    """
    m = board.m if m is None else m
    return work_estimate(len(board.atoms), p, m) <= WORK_BUDGET


class _BoardData:
    """Per-board arrays, exact and floating."""

    def __init__(self, board: Board, p: int, live: list[int]):
        self.board = board
        self.p = p
        self.live = live
        atoms = board.atoms
        self.A = len(atoms)
        self.alpha = [a.board_span[0] for a in atoms]
        self.beta = [a.board_span[1] for a in atoms]
        self.bundle = [a.bundle for a in atoms]
        self.frost = [[a.frosting[j] for j in live] for a in atoms]
        self.dens = [[f / a.length for f in row] for a, row in zip(atoms, self.frost)]
        T = board.totals()
        self.target = [T[j] / p for j in live]
        self.f_alpha = np.array([float(x) for x in self.alpha])
        self.f_beta = np.array([float(x) for x in self.beta])
        self.f_frost = np.array([[float(x) for x in row] for row in self.frost]).reshape(self.A, len(live))
        self.f_dens = np.array([[float(x) for x in row] for row in self.dens]).reshape(self.A, len(live))
        self.f_target = np.array([float(x) for x in self.target])
        self.scale = max([1.0] + [float(T[j]) for j in live])
        self.f_bundle = np.array(self.bundle, dtype=np.int64)


CACHE_ROWS = 1 << 21


def _blocks(n_atoms: int, k: int) -> Iterator[np.ndarray]:
    it = itertools.combinations_with_replacement(range(n_atoms), k)
    while True:
        block = list(itertools.islice(it, CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), k)


class _Assignments:
    """Lexicographic cell assignments in chunks; small tables are built once."""

    def __init__(self, n_atoms: int):
        self.n_atoms = n_atoms
        self.cache: dict[int, list[np.ndarray]] = {}

    def __call__(self, k: int) -> Iterator[np.ndarray]:
        if k == 0:
            return iter([np.zeros((1, 0), dtype=np.int64)])
        if k in self.cache:
            return iter(self.cache[k])
        if assignment_count(self.n_atoms, k) <= CACHE_ROWS:
            self.cache[k] = list(_blocks(self.n_atoms, k))
            return iter(self.cache[k])
        return _blocks(self.n_atoms, k)


class _LabelingSystem:
    """The affine share map for one labeling, ready for batched screening."""

    def __init__(self, data: _BoardData, labels: tuple[int, ...]):
        self.data = data
        self.labels = labels
        p = data.p
        s = len(labels) - 1
        self.active = [k for k in range(1, s + 1) if labels[k - 1] != labels[k]]
        res = (data.f_bundle[None, :] + np.array(labels)[:, None]) % p  # (s+1, A)
        ind = (res[:, :, None] == np.arange(p)[None, None, :]).astype(float)  # (s+1, A, p)
        delta = ind[:-1] - ind[1:]  # (s, A, p); row k-1 belongs to cut k
        g = delta[:, :, :, None] * data.f_frost[None, :, None, :]
        P = np.cumsum(g, axis=1) - g  # exclusive prefix over atoms
        D = delta[:, :, :, None] * data.f_dens[None, :, None, :]
        base = np.einsum("aj,au->uj", data.f_frost, ind[-1])
        act = [k - 1 for k in self.active]
        # keep residues 1..p-1; residue 0 follows from the totals
        R = (p - 1) * len(data.live)
        self.P = P[act][:, :, 1:, :].reshape(len(act), data.A, R)
        self.D = D[act][:, :, 1:, :].reshape(len(act), data.A, R)
        self.base = base[1:, :].reshape(-1)
        self.rhs0 = np.tile(data.f_target, p - 1)

    def screen(self, C: np.ndarray) -> np.ndarray:
        """Indices of rows of ``C`` (cell per active cut) that look feasible."""
        data = self.data
        B, k = C.shape
        R = self.base.shape[0]
        if k == 0:
            ok = np.abs(self.rhs0 - self.base).max(initial=0.0) <= SCREEN_TOL * data.scale
            return np.arange(B) if ok else np.arange(0)
        cols = np.stack([self.D[i][C[:, i]] for i in range(k)], axis=2)  # (B, R, k)
        const = self.base + sum(self.P[i][C[:, i]] for i in range(k))
        lo = data.f_alpha[C]
        hi = data.f_beta[C]
        rhs = self.rhs0 - const  # unknowns are offsets z - lo
        tol = SCREEN_TOL
        good = np.zeros(B, dtype=bool)
        if k == R:
            norms = np.linalg.norm(cols, axis=1).prod(axis=1)
            regular = np.abs(np.linalg.det(cols)) > SINGULAR_TOL * np.maximum(norms, 1e-300)
        else:
            regular = np.zeros(B, dtype=bool)
        if regular.any():
            z = np.linalg.solve(cols[regular], rhs[regular][:, :, None])[:, :, 0] + lo[regular]
            inside = (z >= lo[regular] - tol).all(axis=1) & (z <= hi[regular] + tol).all(axis=1)
            if k > 1:
                inside &= (np.diff(z, axis=1) >= -tol).all(axis=1)
            good[regular] = inside
        rest = ~regular
        if rest.any():
            # singular or overdetermined: only ask for consistency, the exact pass decides the box
            M, r = cols[rest], rhs[rest]
            G = np.einsum("brk,brl->bkl", M, M)
            ridge = 1e-12 * np.maximum(np.trace(G, axis1=1, axis2=2), 1e-300)
            G = G + ridge[:, None, None] * np.eye(k)
            w = np.linalg.solve(G, np.einsum("brk,br->bk", M, r)[:, :, None])[:, :, 0]
            resid = np.abs(np.einsum("brk,bk->br", M, w) - r).max(axis=1)
            good[rest] = resid <= tol * data.scale
        return np.nonzero(good)[0]

    def exact(self, cells: tuple[int, ...]) -> list[Fraction] | None:
        """Exact cut positions for the active cuts, or ``None``."""
        data = self.data
        p = data.p
        labels = self.labels
        mJ = len(data.live)
        rows = [(u, j) for u in range(1, p) for j in range(mJ)]

        def hit(a, k, u):
            return 1 if (data.bundle[a] + labels[k]) % p == u else 0

        const = {(u, j): Fraction(0) for u, j in rows}
        coef = {(u, j): [Fraction(0)] * len(cells) for u, j in rows}
        s = len(labels) - 1
        for a in range(data.A):
            for u, j in rows:
                const[u, j] += data.frost[a][j] * hit(a, s, u)
        for i, (k, c) in enumerate(zip(self.active, cells)):
            for u, j in rows:
                acc = Fraction(0)
                for a in range(c):
                    d = hit(a, k - 1, u) - hit(a, k, u)
                    if d:
                        acc += d * data.frost[a][j]
                d = hit(c, k - 1, u) - hit(c, k, u)
                const[u, j] += acc - d * data.dens[c][j] * data.alpha[c]
                coef[u, j][i] = d * data.dens[c][j]
        A = [coef[r] for r in rows]
        b = [data.target[j] - const[u, j] for u, j in rows]
        lo = [data.alpha[c] for c in cells]
        hi = [data.beta[c] for c in cells]
        z = solve_square(A, b) if len(A) == len(cells) else None
        if z is not None:
            if all(l <= v <= h for v, l, h in zip(z, lo, hi)) and all(x <= y for x, y in zip(z, z[1:])):
                return z
            return None
        order = [[Fraction(0)] * len(cells) for _ in range(len(cells) - 1)]
        for i, row in enumerate(order):
            row[i], row[i + 1] = Fraction(1), Fraction(-1)
        return feasible_point(A, b, lo, hi, order, [Fraction(0)] * len(order))

    def partition(self, z_active: list[Fraction]) -> LabeledPartition:
        s = len(self.labels) - 1
        cuts = []
        pos = dict(zip(self.active, z_active))
        last = Fraction(0)
        for k in range(1, s + 1):
            last = pos.get(k, last)
            cuts.append(last)
        factors = LabelingScheme(self.data.p, s // (self.data.p - 1)).factors
        return LabeledPartition(self.data.p, tuple(cuts), self.labels, factors)


def full_bundles(board: Board, partition: LabeledPartition) -> list[int]:
    """Whole bundles each agent receives under a partition."""
    p = partition.p
    bounds = (Fraction(0),) + tuple(partition.cuts) + (Fraction(1),)
    owners: dict[int, set[int]] = {}
    for atom in board.atoms:
        a, b = atom.board_span
        got = owners.setdefault(atom.bundle, set())
        for k, label in enumerate(partition.labels):
            if min(b, bounds[k + 1]) > max(a, bounds[k]):
                got.add((atom.bundle + label) % p)
    counts = [0] * p
    for got in owners.values():
        if len(got) == 1:
            counts[next(iter(got))] += 1
    return counts


def solve_prime(
    board: Board, p: int, force: bool = False, min_full: int | None = None
) -> LabeledPartition:
    """First exactly fair labeled partition in (labeling, cell assignment) order.

    Kinds with zero total are dropped, which also drops their cuts. With
    ``min_full`` set, partitions leaving some agent fewer whole bundles are
    skipped. Raises :class:`BudgetExceededError` outside the desk-scale envelope
    unless ``force``.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    T = board.totals()
    live = [j for j in range(board.m) if T[j] > 0]
    m_eff = len(live)
    if not force and not within_budget(board, p, m_eff):
        raise BudgetExceededError(
            f"search over {work_estimate(len(board.atoms), p, m_eff)} systems exceeds the budget; use force"
        )
    scheme = LabelingScheme(p, m_eff)
    data = _BoardData(board, p, live)
    assignments = _Assignments(data.A)
    for labels in canonical_labelings(scheme):
        system = _LabelingSystem(data, labels)
        for C in assignments(len(system.active)):
            for idx in system.screen(C):
                cells = tuple(int(c) for c in C[idx])
                z = system.exact(cells)
                if z is None:
                    continue
                part = system.partition(z)
                if min_full is not None and min(full_bundles(board, part)) < min_full:
                    continue
                _check(board, part, T)
                return part
    raise SearchExhaustedError(f"no fair labeled partition found for p={p}")


def _check(board: Board, part: LabeledPartition, T) -> None:
    y = shares(board, part).y
    for u, row in enumerate(y):
        for j, v in enumerate(row):
            if v != T[j] / part.p:
                raise InvariantViolation(f"residue {u} kind {j} gets {v}, expected {T[j] / part.p}")


def solve_prime_instance(instance: Instance, p: int, force: bool = False) -> Allocation:
    if instance.n == 0:
        return Allocation(p, ())
    board = layout(instance)
    return to_allocation(board, solve_prime(board, p, force=force), instance.n)
