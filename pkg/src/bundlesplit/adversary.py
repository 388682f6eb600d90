"""Instance generators: tight instances for the cut count, and random ones."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import Instance
from .errors import TooFewCookiesError


def tight_instance(m: int, r: int, n: int) -> Instance:
    """Kind ``j`` spread evenly over its own block of ``r - 1`` cookies; the rest are empty.

    Every cookie carrying frosting must then be cut, so ``(r-1)m`` strokes are needed.
    """
    if m < 1 or r < 2:
        raise ValueError("need m >= 1 and r >= 2")
    need = (r - 1) * m
    if n < need:
        raise TooFewCookiesError(f"{need} cookies needed, got {n}")
    share = Fraction(1, r - 1)
    cookies = []
    for j in range(m):
        row = tuple(share if k == j else Fraction(0) for k in range(m))
        cookies.extend([row] * (r - 1))
    cookies.extend([(Fraction(0),) * m] * (n - need))
    return Instance(m, tuple(cookies))


def random_instance(n: int, m: int, rng: random.Random, max_num: int = 9, max_den: int = 5) -> Instance:
    """Random rational frostings ``a/b`` with ``0 <= a <= max_num`` and ``1 <= b <= max_den``."""
    cookies = tuple(
        tuple(Fraction(rng.randint(0, max_num), rng.randint(1, max_den)) for _ in range(m)) for _ in range(n)
    )
    return Instance(m, cookies)
