"""Signed moment-curve point sets and origin hyperplanes that halve weights.

Points are kept as exact integer vectors ``(-1)^i (1, t, ..., t^m)``; their
radial projections onto the sphere are never formed because only the sign
of ``h . v`` matters.

For a hyperplane spanned by ``m`` of the points the side of every other
point has a closed form (a Vandermonde determinant), which is what makes
the candidate search cheap: off the hyperplane the points simply alternate
sides in index order.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoCandidateError
from .linalg import box_solve, rank

SCREEN_TOL = 1e-7
SINGULAR_TOL = 1e-9
CHUNK = 8192


@dataclass(frozen=True)
class GalePointSet:
    m: int
    n_prime: int
    points: tuple[tuple[int, ...], ...]
    params: tuple[int, ...] | None = None  # increasing moment-curve parameters
    signs: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_moment_curve(self) -> bool:
        return self.params is not None and all(a < b for a, b in zip(self.params, self.params[1:]))


@dataclass(frozen=True)
class OriginHyperplane:
    normal: tuple[Fraction, ...]
    boundary: tuple[int, ...]
    positive: tuple[int, ...]
    negative: tuple[int, ...]
    balance: tuple[Fraction, ...] = ()  # fraction of each boundary point sent to the positive side


def gale_points(n_prime: int, m: int) -> GalePointSet:
    """2n'+m points t_i = i on the moment curve with alternating signs."""
    if n_prime < 0 or m < 1:
        raise ValueError("need n' >= 0 and m >= 1")
    N = 2 * n_prime + m
    params = tuple(range(1, N + 1))
    signs = tuple((-1) ** t for t in params)
    pts = tuple(tuple(s * t**e for e in range(m + 1)) for t, s in zip(params, signs))
    return GalePointSet(m, n_prime, pts, params, signs)


# ---------------------------------------------------------------------------
# exact sidedness


def det(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(v) for v in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return d


def spanned_normal(vectors: Sequence[Sequence], dim: int) -> tuple[Fraction, ...]:
    """Normal ``h`` with ``h . x = det[vectors..., completion..., x]``.

    When the vectors span fewer than ``dim - 1`` dimensions they are completed
    with the first standard basis vectors that raise the rank.
    """
    rows = [list(v) for v in vectors]
    if rank(rows) < len(rows):
        basis = []
        for v in rows:
            if rank(basis + [v]) > len(basis):
                basis.append(v)
        rows = basis
    for i in range(dim):
        if len(rows) == dim - 1:
            break
        e = [0] * dim
        e[i] = 1
        if rank(rows + [e]) > len(rows):
            rows.append(e)
    h = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        h.append(det(rows + [e]))
    return tuple(h)


def side_counts(normal: Sequence, points: Sequence[Sequence]) -> tuple[int, int, int]:
    """(# strictly positive, # strictly negative, # on the hyperplane)."""
    pos = neg = 0
    for v in points:
        d = sum(Fraction(a) * b for a, b in zip(normal, v))
        if d > 0:
            pos += 1
        elif d < 0:
            neg += 1
    return pos, neg, len(points) - pos - neg


def validate_gale(pts: GalePointSet, random_normals: int = 64, seed: int = 0) -> bool:
    """Every origin hyperplane leaves at least n' points in each open half-space.

    Checks every hyperplane spanned by up to ``m`` of the points, plus a
    battery of random rational normals.
    """
    dim = pts.m + 1
    need = pts.n_prime
    for size in range(1, pts.m + 1):
        for sub in itertools.combinations(pts.points, size):
            h = spanned_normal(sub, dim)
            if not any(h):
                return False
            pos, neg, _ = side_counts(h, pts.points)
            if pos < need or neg < need:
                return False
    rng = random.Random(seed)
    for _ in range(random_normals):
        h = [Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(dim)]
        if not any(h):
            continue
        pos, neg, _ = side_counts(h, pts.points)
        if pos < need or neg < need:
            return False
    return True


def subset_sides(pts: GalePointSet, subset: Sequence[int]) -> list[int]:
    """Sign of ``h_S . v_k`` for every point, where ``h_S`` is spanned by ``subset``."""
    if pts.is_moment_curve:
        sub = sorted(subset)
        s_prod = 1
        for i in sub:
            s_prod *= pts.signs[i]
        out = []
        members = set(sub)
        for k in range(len(pts)):
            if k in members:
                out.append(0)
            else:
                above = sum(1 for i in sub if pts.params[i] > pts.params[k])
                out.append(s_prod * pts.signs[k] * (-1) ** above)
        return out
    h = spanned_normal([pts.points[i] for i in sorted(subset)], pts.m + 1)
    out = []
    for v in pts.points:
        d = sum(a * b for a, b in zip(h, v))
        out.append((d > 0) - (d < 0))
    return out


# ---------------------------------------------------------------------------
# balancing


def boundary_balance(
    boundary_weights: Sequence[Sequence[Fraction]],
    side_totals: Sequence[Fraction],
    grand_totals: Sequence[Fraction],
) -> tuple[Fraction, ...] | None:
    """Fractions ``x`` in ``[0,1]^k`` with side + sum x_i w_i = grand / 2 per kind.

    Returns ``None`` when no such ``x`` exists.
    """
    k = len(boundary_weights)
    m = len(grand_totals)
    rows, rhs = [], []
    for j in range(m):
        row = [Fraction(boundary_weights[i][j]) for i in range(k)]
        b = Fraction(grand_totals[j]) / 2 - Fraction(side_totals[j])
        if not any(row):
            if b != 0:
                return None
            continue
        rows.append(row)
        rhs.append(b)
    if k == 0:
        return () if not rows else None
    if not rows:
        return tuple(Fraction(0) for _ in range(k))
    x = box_solve(rows, rhs, [Fraction(0)] * k, [Fraction(1)] * k)
    return None if x is None else tuple(x)


@dataclass(frozen=True)
class Option:
    """How a boundary point is split: the positive side gets ``base + x * direction``."""

    base: tuple[Fraction, ...]
    direction: tuple[Fraction, ...]
    tag: object = None


@dataclass(frozen=True)
class Halving:
    subset: tuple[int, ...]
    orientation: int
    sides: tuple[int, ...]
    options: tuple[int, ...]  # chosen option index per subset member
    fractions: tuple[Fraction, ...]


def _combos(N: int, k: int):
    it = itertools.combinations(range(N), k)
    while True:
        chunk = list(itertools.islice(it, CHUNK))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64).reshape(len(chunk), k)


def _moment_sides(pts: GalePointSet, C: np.ndarray) -> np.ndarray:
    N = len(pts)
    signs = np.array(pts.signs, dtype=np.int64)
    params = np.array(pts.params, dtype=np.int64)
    s_prod = np.prod(signs[C], axis=1)
    above = (params[C][:, :, None] > params[None, None, :]).sum(axis=1)
    side = s_prod[:, None] * signs[None, :] * np.where(above % 2 == 0, 1, -1)
    rows = np.repeat(np.arange(len(C)), C.shape[1])
    side[rows, C.ravel()] = 0
    return side


def _screen(
    pts: GalePointSet,
    C: np.ndarray,
    Wf: np.ndarray,
    opt_start: np.ndarray,
    opt_count: np.ndarray,
    base_f: np.ndarray,
    dir_f: np.ndarray,
):
    """Float pre-screen of a chunk of subsets; yields rows that may be feasible, in order."""
    k = C.shape[1]
    if pts.is_moment_curve:
        side = _moment_sides(pts, C)
    else:
        side = np.array([subset_sides(pts, list(c)) for c in C], dtype=np.int64)
    # both orientations, interleaved: (S, +), (S, -)
    side = np.repeat(side, 2, axis=0) * np.tile([1, -1], len(C))[:, None]
    CC = np.repeat(C, 2, axis=0)
    orient = np.tile([1, -1], len(C))
    # expand per-member option choices, keeping lexicographic order
    rows = np.arange(len(CC))
    chosen = np.zeros((len(CC), 0), dtype=np.int64)
    for j in range(k):
        cnt = opt_count[CC[rows, j]]
        rep = np.repeat(np.arange(len(rows)), cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        new = opt_start[CC[rows[rep], j]] + offs
        chosen = np.concatenate([chosen[rep], new[:, None]], axis=1)
        rows = rows[rep]
    A = (side[rows] > 0).astype(float) @ Wf
    rhs = 0.5 - A - base_f[chosen].sum(axis=1)
    D = np.transpose(dir_f[chosen], (0, 2, 1))  # kinds x members
    norms = np.linalg.norm(D, axis=1)
    zero_col = (norms < 1e-300).any(axis=1)
    Dn = D / np.where(norms < 1e-300, 1.0, norms)[:, None, :]
    ratio = np.abs(np.linalg.det(Dn))
    singular = zero_col | (ratio < SINGULAR_TOL)
    maybe = np.zeros(len(rows), dtype=bool)
    ok = ~singular
    if ok.any():
        x = np.linalg.solve(D[ok], rhs[ok][:, :, None])[:, :, 0]
        maybe[ok] = ((x >= -SCREEN_TOL) & (x <= 1 + SCREEN_TOL)).all(axis=1)
    if singular.any():
        Ds = D[singular]
        x = np.einsum("bij,bj->bi", np.linalg.pinv(Ds), rhs[singular])
        res = np.abs(np.einsum("bij,bj->bi", Ds, x) - rhs[singular]).max(axis=1)
        maybe[singular] = res <= 1e-7
    for i in np.flatnonzero(maybe):
        yield CC[rows[i]], int(orient[rows[i]]), side[rows[i]], chosen[i]


def find_halving(
    pts: GalePointSet,
    weights: Sequence[Sequence[Fraction]],
    options: Sequence[Sequence[Option]] | None = None,
    screen: bool = True,
) -> Halving:
    """First (subset, orientation, options) in lexicographic order that halves every kind.

    ``weights[k]`` is point k's full frosting vector (it goes to the positive
    side when k lies there). ``options[k]`` lists the ways point k may be split
    when it lies on the hyperplane; by default a single proportional cut.
    Every kind must have a positive total.
    """
    N = len(pts)
    m = pts.m
    W = [tuple(Fraction(q) for q in w) for w in weights]
    if len(W) != N:
        raise ValueError("one weight vector per point is required")
    T = tuple(sum((w[j] for w in W), Fraction(0)) for j in range(m))
    if any(t == 0 for t in T):
        raise ValueError("every kind needs a positive total")
    if options is None:
        options = [[Option(tuple(Fraction(0) for _ in range(m)), w)] for w in W]
    flat = [o for opts in options for o in opts]
    opt_count = np.array([len(o) for o in options], dtype=np.int64)
    opt_start = np.concatenate([[0], np.cumsum(opt_count)[:-1]]).astype(np.int64)
    scale = np.array([1.0 / float(t) for t in T])
    Wf = np.array([[float(q) for q in w] for w in W]).reshape(N, m) * scale
    base_f = np.array([[float(q) for q in o.base] for o in flat]).reshape(len(flat), m) * scale
    dir_f = np.array([[float(q) for q in o.direction] for o in flat]).reshape(len(flat), m) * scale

    def exact(subset, orient, side, chosen):
        A = [Fraction(0)] * m
        for k in range(N):
            if side[k] > 0:
                for j in range(m):
                    A[j] += W[k][j]
        opts = [flat[c] for c in chosen]
        side_tot = [A[j] + sum((o.base[j] for o in opts), Fraction(0)) for j in range(m)]
        x = boundary_balance([o.direction for o in opts], side_tot, T)
        if x is None:
            return None
        local = tuple(int(c - opt_start[s]) for c, s in zip(chosen, subset))
        return Halving(tuple(int(s) for s in subset), orient, tuple(int(v) for v in side), local, x)

    for C in _combos(N, m):
        if screen:
            cands = _screen(pts, C, Wf, opt_start, opt_count, base_f, dir_f)
        else:
            cands = _all_candidates(pts, C, opt_start, opt_count)
        for subset, orient, side, chosen in cands:
            found = exact(subset, orient, side, chosen)
            if found is not None:
                return found
    raise NoCandidateError(
        "no point-spanned hyperplane halves the weights; retry with perturbed curve parameters"
    )


def _all_candidates(pts, C, opt_start, opt_count):
    for c in C:
        base_side = subset_sides(pts, list(c))
        for orient in (1, -1):
            side = [orient * s for s in base_side]
            ranges = [range(opt_start[i], opt_start[i] + opt_count[i]) for i in c]
            for chosen in itertools.product(*ranges):
                yield c, orient, side, chosen


def ham_sandwich_origin(
    pts: GalePointSet, weights: Sequence[Sequence[Fraction]], screen: bool = True
) -> OriginHyperplane:
    """Origin hyperplane through ``m`` points whose sides each hold at most half of every kind.

    Kinds with zero total impose nothing; if every kind is zero the first
    candidate is returned.
    """
    m = pts.m
    W = [tuple(Fraction(q) for q in w) for w in weights]
    live = [j for j in range(m) if any(w[j] for w in W)]
    if live:
        reduced = [tuple(w[j] for j in live) for w in W]
        if len(live) == m:
            h = find_halving(pts, reduced, screen=screen)
        else:
            h = _halving_dead_kinds(pts, reduced)
        subset, orient, fractions = h.subset, h.orientation, h.fractions
    else:
        subset = tuple(range(m))
        orient = 1
        fractions = tuple(Fraction(0) for _ in subset)
    normal = spanned_normal([pts.points[i] for i in subset], m + 1)
    normal = tuple(orient * v for v in normal)
    sides = [
        (d > 0) - (d < 0)
        for d in (sum(a * b for a, b in zip(normal, v)) for v in pts.points)
    ]
    return OriginHyperplane(
        normal=normal,
        boundary=tuple(i for i, s in enumerate(sides) if s == 0),
        positive=tuple(i for i, s in enumerate(sides) if s > 0),
        negative=tuple(i for i, s in enumerate(sides) if s < 0),
        balance=tuple(fractions),
    )


def _halving_dead_kinds(pts, reduced):
    """Exact search when some kinds are identically zero (underdetermined boundary systems)."""
    m = pts.m
    N = len(pts)
    live = len(reduced[0])
    T = [sum((w[j] for w in reduced), Fraction(0)) for j in range(live)]
    for c in itertools.combinations(range(N), m):
        base_side = subset_sides(pts, list(c))
        for orient in (1, -1):
            side = [orient * s for s in base_side]
            A = [sum((reduced[k][j] for k in range(N) if side[k] > 0), Fraction(0)) for j in range(live)]
            x = boundary_balance([reduced[i] for i in c], A, T)
            if x is not None:
                return Halving(tuple(c), orient, tuple(side), tuple(0 for _ in c), x)
    raise NoCandidateError("no point-spanned hyperplane halves the weights")
