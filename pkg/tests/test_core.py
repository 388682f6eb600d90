import json
from decimal import Decimal
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from bundlesplit.core import (
    PAIR,
    SINGLE,
    Allocation,
    Instance,
    LabeledPartition,
    Slice,
    build_board,
    count_bad_cuts,
    dump_allocation,
    dump_instance,
    layout,
    load_allocation,
    load_instance,
    merge_slices,
    pad_empty,
    shares,
    to_allocation,
    to_fraction,
    unpad,
    verify,
)
from bundlesplit.errors import EmptyInstanceError, MalformedInputError, ShapeMismatchError

from conftest import instances


class TestInstance:
    def test_fraction_parsing(self):
        assert to_fraction("3/4") == F(3, 4)
        assert to_fraction(2) == 2
        assert to_fraction(Decimal("0.1")) == F(1, 10)
        with pytest.raises(MalformedInputError):
            to_fraction(True)
        with pytest.raises(MalformedInputError):
            to_fraction("abc")

    def test_rejects_bad_rows(self):
        with pytest.raises(MalformedInputError):
            Instance.of([(1, 2), (3,)], m=2)
        with pytest.raises(MalformedInputError):
            Instance.of([(-1,)])

    def test_json_round_trip_is_exact(self, tmp_path):
        inst = Instance.of([("1/3", 2), (0, "7/5")])
        path = tmp_path / "i.json"
        dump_instance(inst, path)
        assert load_instance(path) == inst
        assert json.loads(path.read_text())["cookies"][0] == ["1/3", "2"]

    def test_decimal_input_is_flagged_and_exact(self, tmp_path):
        path = tmp_path / "d.json"
        path.write_text('{"m": 1, "cookies": [[0.1], [0.2]]}')
        inst = load_instance(path)
        assert inst.decimal_input
        assert inst.cookies[0][0] == F(1, 10)
        assert inst.default_tol() > 0
        assert Instance.of([(1,)]).default_tol() == 0

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(MalformedInputError):
            load_instance(path)
        path.write_text('{"cookies": []}')
        with pytest.raises(MalformedInputError):
            load_instance(path)

    def test_pad_empty(self):
        inst = Instance.of([(1,), (2,), (3,)])
        padded = pad_empty(inst, 1)
        assert padded.n == 4 and padded.cookies[3] == (F(0),)
        assert pad_empty(inst, 0) == inst


class TestLayout:
    def test_two_cookies(self):
        board = layout(Instance.of([(1,), (3,)]))
        assert [a.board_span for a in board.atoms] == [(0, F(1, 2)), (F(1, 2), 1)]
        assert [a.frosting for a in board.atoms] == [(1,), (3,)]

    def test_single_cookie(self):
        (atom,) = layout(Instance.of([(5,)])).atoms
        assert atom.board_span == (0, 1)

    def test_totals_preserved(self):
        inst = Instance.of([(1, 2), (3, 4), (5, 6), (7, 8)])
        board = layout(inst)
        assert all(a.length == F(1, 4) for a in board.atoms)
        assert board.totals() == inst.totals()

    def test_empty(self):
        with pytest.raises(EmptyInstanceError):
            layout(Instance(1, ()))

    def test_build_board_composite(self):
        board = build_board([[(0, F(0), F(1, 2), (F(1),)), (1, F(0), F(1), (F(3),))], [(2, F(0), F(1), (F(2),))]], 1)
        assert board.n_bundles == 2
        spans = [a.board_span for a in board.atoms]
        assert spans == [(0, F(1, 6)), (F(1, 6), F(1, 2)), (F(1, 2), 1)]
        assert board.bundle_frosting(0) == (4,)
        assert not board.is_uniform()


class TestShares:
    def test_single_label_one_cookie(self):
        board = layout(Instance.of([(6,)]))
        y = shares(board, LabeledPartition(3, (), (0,))).y
        assert y == ((6,), (0,), (0,))

    def test_three_cookies_cycle(self):
        board = layout(Instance.of([(1,), (1,), (1,)]))
        y = shares(board, LabeledPartition(3, (), (0,))).y
        assert y == ((1,), (1,), (1,))

    def test_half_cut(self):
        board = layout(Instance.of([(1,)]))
        y = shares(board, LabeledPartition(2, (F(1, 2),), (0, 1))).y
        assert y == ((F(1, 2),), (F(1, 2),))

    def test_column_sums_are_totals(self):
        inst = Instance.of([(1, 2), (3, 0), (2, 2)])
        board = layout(inst)
        part = LabeledPartition(3, (F(1, 5), F(2, 3)), (0, 2, 1), (PAIR, SINGLE))
        assert shares(board, part).column_sums() == inst.totals()


class TestPartitions:
    def test_pair_constraint(self):
        with pytest.raises(ValueError):
            LabeledPartition(3, (F(1, 2),), (0, 1), (PAIR,))
        LabeledPartition(3, (F(1, 2),), (0, 2), (PAIR,))

    def test_cut_order(self):
        with pytest.raises(ValueError):
            LabeledPartition(2, (F(1, 2), F(1, 3)), (0, 1, 0))

    def test_no_cut_allocation(self):
        board = layout(Instance.of([(1,), (1,)]))
        alloc = to_allocation(board, LabeledPartition(2, (), (0,)))
        assert alloc.shares == (((1, 1),), ((2, 1),))

    def test_midpoint_cut(self):
        board = layout(Instance.of([(1,)]))
        alloc = to_allocation(board, LabeledPartition(2, (F(1, 2),), (0, 1)))
        assert alloc.shares == (((1, F(1, 2)), (2, F(1, 2))),)
        assert alloc.strokes == 1

    def test_boundary_cut_is_free(self):
        board = layout(Instance.of([(1,), (1,)]))
        alloc = to_allocation(board, LabeledPartition(2, (F(1, 2),), (0, 1)))
        assert alloc.strokes == 0
        assert alloc.full_per_agent() == (2, 0)

    def test_bad_cuts(self):
        assert count_bad_cuts(LabeledPartition(2, (F(0), F(0)), (0, 0, 0))) == 0
        assert count_bad_cuts(LabeledPartition(3, (F(0),), (0, 2))) == 0
        assert count_bad_cuts(LabeledPartition(3, (F(0),), (0, 1))) == 1

    def test_merge_slices(self):
        merged = merge_slices([Slice(0, F(0), F(1, 2), 1), Slice(0, F(1, 2), F(1), 1), Slice(1, F(0), F(1), 2)])
        assert merged == [Slice(0, F(0), F(1), 1), Slice(1, F(0), F(1), 2)]


class TestAllocation:
    def test_validation(self):
        with pytest.raises(ValueError):
            Allocation(2, (((1, F(1, 2)),),))
        with pytest.raises(ValueError):
            Allocation(2, (((3, F(1)),),))
        with pytest.raises(ValueError):
            Allocation(2, (((1, F(1, 2)), (1, F(1, 2))),))

    def test_round_trip(self, tmp_path):
        alloc = Allocation(2, (((1, F(1, 3)), (2, F(2, 3))), ((2, F(1)),)))
        path = tmp_path / "a.json"
        dump_allocation(alloc, path)
        assert load_allocation(path) == alloc

    def test_unpad(self):
        alloc = Allocation(2, (((1, F(1)),), ((2, F(1)),)))
        assert unpad(alloc, 1).shares == (((1, F(1)),),)


class TestVerify:
    def test_empty(self):
        rep = verify(Instance(1, ()), Allocation(2, ()), 2)
        assert rep.fair and rep.strokes == 0 and rep.full_per_agent == (0, 0)

    def test_two_full(self):
        inst = Instance.of([(1,), (1,)])
        rep = verify(inst, Allocation(2, (((1, F(1)),), ((2, F(1)),))), 2, tol=0)
        assert rep.fair and rep.full_per_agent == (1, 1)

    def test_three_with_half(self):
        inst = Instance.of([(1,), (1,), (1,)])
        alloc = Allocation(2, (((1, F(1)),), ((2, F(1)),), ((1, F(1, 2)), (2, F(1, 2)))))
        rep = verify(inst, alloc, 2, tol=0)
        assert rep.fair and rep.strokes == 1 and rep.full_per_agent == (1, 1)

    def test_unfair_reports_worst(self):
        inst = Instance.of([(1, 0), (0, 1)])
        rep = verify(inst, Allocation(2, (((1, F(1)),), ((1, F(1)),))), 2)
        assert not rep.fair and rep.residual == F(1, 2)
        assert rep.worst == (1, 1)

    def test_shape_mismatch(self):
        inst = Instance.of([(1,)])
        with pytest.raises(ShapeMismatchError):
            verify(inst, Allocation(3, (((1, F(1)),),)), 2)
        with pytest.raises(ShapeMismatchError):
            verify(inst, Allocation(2, ()), 2)

    def test_decimal_tolerance(self):
        inst = Instance.from_json({"m": 1, "cookies": [[Decimal("0.1")], [Decimal("0.1")]]})
        near = F(1, 2) + F(1, 10**12)
        alloc = Allocation(2, (((1, near), (2, 1 - near)), ((1, 1 - near), (2, near))))
        assert verify(inst, alloc, 2).fair
        off = F(1, 2) + F(1, 100)
        alloc = Allocation(2, (((1, off), (2, 1 - off)), ((1, off), (2, 1 - off))))
        assert not verify(inst, alloc, 2).fair


@settings(max_examples=60, deadline=None)
@given(instances(n_max=8))
def test_any_labeled_partition_conserves_frosting(inst):
    board = layout(inst)
    part = LabeledPartition(3, (F(1, 7), F(1, 2), F(5, 6)), (0, 2, 2, 1))
    alloc = to_allocation(board, part)
    y = verify(inst, alloc, 3).totals
    assert tuple(sum(col) for col in zip(*y)) == inst.totals()
    assert shares(board, part).y == y
