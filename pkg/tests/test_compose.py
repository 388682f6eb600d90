import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from bundlesplit.bounds import guarantee_main, guarantee_pow2, guarantee_two
from bundlesplit.compose import (
    ProductRecord,
    check_tiling,
    full_counts,
    plan_strokes,
    smallest_prime_factor,
    solve,
    solve_pow2,
    solve_product,
)
from bundlesplit.core import Instance, Slice, layout, verify
from bundlesplit.errors import InvariantViolation
from bundlesplit.solver_two import solve_two

from conftest import instances, rand_instance


def check(inst, alloc, r, bound):
    rep = verify(inst, alloc, r, tol=0)
    assert rep.fair and rep.residual == 0
    assert rep.strokes <= (r - 1) * inst.m
    assert min(rep.full_per_agent) >= bound
    return rep


def test_smallest_prime_factor():
    assert [smallest_prime_factor(r) for r in (2, 9, 15, 49, 12)] == [2, 3, 3, 7, 2]


class TestPow2:
    def test_divisible(self):
        inst = rand_instance(random.Random(1), 13, 3)
        trace = []
        check(inst, solve_pow2(inst, 4, trace), 4, guarantee_pow2(13, 3, 4))
        assert guarantee_pow2(13, 3, 4) == 1
        assert trace and all(rec.holds for rec in trace)

    def test_padded(self):
        inst = rand_instance(random.Random(2), 14, 3)
        check(inst, solve_pow2(inst, 4), 4, max(0, guarantee_pow2(14, 3, 4)))

    def test_two_is_the_halving(self):
        inst = rand_instance(random.Random(3), 9, 2)
        assert solve_pow2(inst, 2) == solve_two(inst)

    def test_eight(self):
        inst = rand_instance(random.Random(4), 20, 1)
        check(inst, solve_pow2(inst, 8), 8, guarantee_pow2(20, 1, 8))

    def test_rejects_other_r(self):
        with pytest.raises(ValueError):
            solve_pow2(Instance.of([(1,)]), 6)


class TestProduct:
    def test_six_agents(self):
        inst = rand_instance(random.Random(5), 8, 1)
        trace = []
        check(inst, solve_product(inst, 3, 2, trace), 6, guarantee_main(8, 1, 6))
        rec = trace[-1]
        assert (rec.a, rec.b) == (3, 2) and rec.holds
        assert rec.group_bound == guarantee_two(8, 1)
        assert rec.stroke_budget == 5

    def test_two_by_two(self):
        inst = rand_instance(random.Random(6), 13, 3)
        check(inst, solve_product(inst, 2, 2), 4, guarantee_main(13, 3, 4))

    def test_trivial_factor(self):
        inst = rand_instance(random.Random(7), 6, 1)
        assert solve_product(inst, 3, 1) == solve(inst, 3)

    def test_record_holds(self):
        rec = ProductRecord(3, 2, 10, 1, (4, 4), 4, (1, 1, 1, 1, 1, 1), 1, 5, 5)
        assert rec.holds
        assert not ProductRecord(3, 2, 10, 1, (4, 4), 4, (1, 1, 1, 1, 1, 0), 1, 5, 5).holds
        assert not ProductRecord(3, 2, 10, 1, (4, 4), 4, (1,) * 6, 1, 6, 5).holds


class TestSolve:
    def test_one_agent(self):
        inst = Instance.of([(1,), (2,)])
        rep = check(inst, solve(inst, 1), 1, 2)
        assert rep.strokes == 0

    def test_empty(self):
        assert solve(Instance(1, ()), 5).shares == ()

    @pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 8, 9, 10, 12])
    def test_many_r(self, r):
        rng = random.Random(r)
        for _ in range(3):
            inst = rand_instance(rng, rng.randint(1, 14), 1)
            check(inst, solve(inst, r), r, guarantee_main(inst.n, 1, r))

    def test_four_prefers_pow2(self):
        inst = rand_instance(random.Random(8), 13, 3)
        assert solve(inst, 4) == solve_pow2(inst, 4)

    def test_trace_chain_replays(self):
        rng = random.Random(9)
        for _ in range(10):
            inst = rand_instance(rng, rng.randint(1, 10), 1)
            trace = []
            check(inst, solve(inst, 12, trace), 12, guarantee_main(inst.n, 1, 12))
            assert trace and all(rec.holds for rec in trace)


class TestChecks:
    def test_tiling_detects_gap_and_overlap(self):
        board = layout(Instance.of([(1,), (1,)]))
        good = [Slice(0, F(0), F(1), 1), Slice(1, F(0), F(1), 2)]
        check_tiling(board, good)
        assert full_counts(board, good, 2) == [1, 1] and plan_strokes(good) == 0
        with pytest.raises(InvariantViolation):
            check_tiling(board, [Slice(0, F(0), F(1, 2), 1), Slice(1, F(0), F(1), 2)])
        with pytest.raises(InvariantViolation):
            check_tiling(board, good + [Slice(1, F(1, 2), F(1), 1)])
        with pytest.raises(InvariantViolation):
            check_tiling(board, good[:1])


@settings(max_examples=40, deadline=None)
@given(instances(n_max=10, m_max=2))
def test_six_agents_property(inst):
    check(inst, solve(inst, 6), 6, guarantee_main(inst.n, inst.m, 6))


@settings(max_examples=40, deadline=None)
@given(instances(n_max=16, m_max=3))
def test_four_agents_property(inst):
    rep = check(inst, solve(inst, 4), 4, guarantee_main(inst.n, inst.m, 4))
    assert min(rep.full_per_agent) >= guarantee_pow2(inst.n, inst.m, 4)
