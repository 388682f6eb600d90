"""Closed-form full-cookie guarantees.

All formulas return plain (possibly negative) integers; clamping at zero is
left to reporting code so that the algebraic identities stay checkable.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def is_power_of_two(r: int) -> bool:
    return r >= 1 and r & (r - 1) == 0


def guarantee_main(n: int, m: int, r: int) -> int:
    """floor((n - ceil(m(r-1)/2)) / r) - floor(m(r-1)/2)."""
    if r == 1:
        return n
    twice = m * (r - 1)
    return (n - _ceil_div(twice, 2)) // r - twice // 2


def guarantee_conjecture(n: int, m: int, r: int) -> int:
    if r == 1:
        return n
    return (n - m * (r - 1)) // r


def guarantee_two(n: int, m: int) -> int:
    return (n - m) // 2


def guarantee_pow2(n: int, m: int, r: int) -> int:
    """Power-of-two guarantee: exact when r divides n + m, otherwise lose r - 2."""
    if not is_power_of_two(r):
        raise ValueError(f"r={r} is not a power of two")
    if r == 1:
        return n
    if (n + m) % r == 0:
        return (n - (r - 1) * m) // r
    return (n - (r - 1) * m) // r - (r - 2)


def guarantee_naive(n: int, m: int, r: int) -> int:
    """Bound of the plain test-map scheme that spends (r-1)(m+1) cuts."""
    if r == 1:
        return n
    return _ceil_div(n, r) - (r - 1) * (m + 1)


def guarantee_no_vz(n: int, m: int, r: int) -> int:
    """The bound obtained with the full join instead of the sparse pair factors."""
    if r == 1:
        return n
    return _ceil_div(n, r) - m * (r - 1)


def worst_after_bad_cuts(n: int, m: int, r: int, b: int) -> int:
    """Full cookies left to the most-skipped agent after ``b`` bad cuts."""
    if r == 1:
        return n
    return (n + b - (r - 1) * m) // r - b


def max_bad_cuts(m: int, r: int) -> int:
    return (r - 1) * m // 2


@dataclass(frozen=True)
class BoundsTable:
    n: int
    m: int
    r: int
    cut_budget: int
    main: int
    conjecture: int
    two: int | None
    pow2_exact: int | None
    pow2_general: int | None
    naive: int
    no_vz: int

    def as_dict(self) -> dict:
        return asdict(self)

    def rows(self) -> list[tuple[str, int | None]]:
        return [(k, v) for k, v in self.as_dict().items() if k not in ("n", "m", "r")]

    def render(self) -> str:
        rows = self.rows()
        width = max(len(k) for k, _ in rows)
        lines = [f"n={self.n} m={self.m} r={self.r}"]
        for k, v in rows:
            lines.append(f"{k:<{width}}  {'-' if v is None else v}")
        return "\n".join(lines)


def bounds_table(n: int, m: int, r: int) -> BoundsTable:
    pow2 = is_power_of_two(r) and r >= 2
    return BoundsTable(
        n=n,
        m=m,
        r=r,
        cut_budget=(r - 1) * m,
        main=guarantee_main(n, m, r),
        conjecture=guarantee_conjecture(n, m, r),
        two=guarantee_two(n, m) if r == 2 else None,
        pow2_exact=(n - (r - 1) * m) // r if pow2 and (n + m) % r == 0 else None,
        pow2_general=(n - (r - 1) * m) // r - (r - 2) if pow2 else None,
        naive=guarantee_naive(n, m, r),
        no_vz=guarantee_no_vz(n, m, r),
    )
