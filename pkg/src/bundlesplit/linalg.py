"""Exact rational linear algebra for the tiny systems the solvers produce.

Everything here works on ``fractions.Fraction`` (ints are accepted and
promoted). Dimensions are a handful of rows and columns, so dense
row operations in pure Python are plenty.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def solve_square(A: Matrix, b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``A x = b`` for square ``A``; ``None`` when ``A`` is singular."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        prow = [v * inv for v in M[col]]
        M[col] = prow
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * p for a, p in zip(M[r], prow)]
    return [M[i][n] for i in range(n)]


def rank(A: Matrix) -> int:
    M = [[Fraction(v) for v in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * p for a, p in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def feasible_point(
    A_eq: Matrix,
    b_eq: Sequence[Fraction],
    lower: Sequence[Fraction],
    upper: Sequence[Fraction | None],
    A_ub: Matrix = (),
    b_ub: Sequence[Fraction] = (),
) -> list[Fraction] | None:
    """Return a vertex of ``{x : A_eq x = b_eq, A_ub x <= b_ub, lower <= x <= upper}``.

    Phase one of the primal simplex method on an exact tableau with Bland's
    rule, so the result is deterministic and the method cannot cycle. An
    ``upper`` entry of ``None`` means unbounded above. Returns ``None`` when
    the polyhedron is empty.
    """
    nvar = len(lower)
    lo = [Fraction(v) for v in lower]
    rows: list[tuple[list[Fraction], Fraction, bool]] = []  # (coeffs, rhs, has_slack)
    for row, rhs in zip(A_eq, b_eq):
        coeffs = [Fraction(v) for v in row]
        rows.append((coeffs, Fraction(rhs) - sum(c * l for c, l in zip(coeffs, lo)), False))
    for row, rhs in zip(A_ub, b_ub):
        coeffs = [Fraction(v) for v in row]
        rows.append((coeffs, Fraction(rhs) - sum(c * l for c, l in zip(coeffs, lo)), True))
    for i, u in enumerate(upper):
        if u is None:
            continue
        width = Fraction(u) - lo[i]
        if width < 0:
            return None
        coeffs = [Fraction(0)] * nvar
        coeffs[i] = Fraction(1)
        rows.append((coeffs, width, True))

    nslack = sum(1 for _, _, s in rows if s)
    nrow = len(rows)
    # columns: original vars | slacks | artificials | rhs
    ncol = nvar + nslack + nrow
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    slack_at = nvar
    for r, (coeffs, rhs, has_slack) in enumerate(rows):
        line = coeffs + [Fraction(0)] * (nslack + nrow) + [rhs]
        if has_slack:
            line[slack_at] = Fraction(1)
            slack_col = slack_at
            slack_at += 1
        else:
            slack_col = None
        if rhs < 0:
            line = [-v for v in line]
        if slack_col is not None and line[slack_col] == 1:
            basis.append(slack_col)
        else:
            line[nvar + nslack + r] = Fraction(1)
            basis.append(nvar + nslack + r)
        tab.append(line)

    art_start = nvar + nslack
    # phase-one objective: minimise the sum of artificial variables in the basis
    obj = [Fraction(0)] * (ncol + 1)
    for r, bcol in enumerate(basis):
        if bcol >= art_start:
            obj = [o - v for o, v in zip(obj, tab[r])]
            obj[bcol] = Fraction(0)

    while True:
        enter = next((c for c in range(ncol) if obj[c] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for r in range(nrow):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:  # unbounded direction; cannot happen in phase one
            break
        piv = tab[leave][enter]
        prow = [v / piv for v in tab[leave]]
        tab[leave] = prow
        for r in range(nrow):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [a - f * p for a, p in zip(tab[r], prow)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * p for a, p in zip(obj, prow)]
        basis[leave] = enter

    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * nvar
    for r, bcol in enumerate(basis):
        if bcol < nvar:
            x[bcol] = tab[r][-1]
    return [xi + li for xi, li in zip(x, lo)]


def box_solve(
    A: Matrix, b: Sequence[Fraction], lo: Sequence[Fraction], hi: Sequence[Fraction]
) -> list[Fraction] | None:
    """Find ``x`` with ``A x = b`` and ``lo <= x <= hi``.

    Square nonsingular systems are solved directly and the box is then
    checked; anything else goes through :func:`feasible_point`.
    """
    if A and len(A) == len(A[0]):
        x = solve_square(A, b)
        if x is not None:
            if all(l <= v <= h for v, l, h in zip(x, lo, hi)):
                return x
            return None
    return feasible_point(A, b, lo, hi)
