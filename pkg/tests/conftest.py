import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bundlesplit.core import Instance


def fractions(max_num=9, max_den=5):
    return st.builds(Fraction, st.integers(0, max_num), st.integers(1, max_den))


@st.composite
def instances(draw, n_min=1, n_max=10, m_min=1, m_max=3):
    m = draw(st.integers(m_min, m_max))
    n = draw(st.integers(n_min, n_max))
    rows = draw(st.lists(st.tuples(*[fractions()] * m), min_size=n, max_size=n))
    return Instance(m, tuple(rows))


def rand_instance(rng: random.Random, n: int, m: int) -> Instance:
    return Instance(m, tuple(tuple(Fraction(rng.randint(0, 9), rng.randint(1, 5)) for _ in range(m)) for _ in range(n)))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
