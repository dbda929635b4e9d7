from __future__ import annotations

from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmarkov.errors import EmptyInterval, ZeroSlope
from qmarkov.numerics import (
    AffineMap,
    FlaggedInterval as FI,
    IntervalUnion as U,
    affine_apply,
    affine_invert,
    integer_log,
    rat,
    to_decimal,
    union_intersect,
    union_normalize,
)

halfopen = FI(0, Q(1, 2), False, True)


def test_rat_refuses_floats():
    assert rat("3/5") == Q(3, 5)
    assert rat(2) == Q(2)
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(ValueError):
        rat("0.5")
    with pytest.raises(TypeError):
        rat(True)


def test_affine_apply_examples():
    assert affine_apply(AffineMap(1, 0), U.closed(0, 1)) == U.closed(0, 1)
    u = U([halfopen, FI.point(1)])
    assert affine_apply(AffineMap(Q(1, 2), 0), u) == U([FI(0, Q(1, 4), False, True), FI.point(Q(1, 2))])
    assert affine_apply(AffineMap(Q(-5, 4), Q(5, 4)), U.closed(Q(3, 5), 1)) == U.closed(0, Q(1, 2))


def test_negative_slope_swaps_flags():
    out = affine_apply(AffineMap(-1, 1), U([FI(0, Q(1, 4), True, False)]))
    assert out == U([FI(Q(3, 4), 1, False, True)])


def test_zero_slope_collapses():
    assert affine_apply(AffineMap(0, Q(1, 3)), U([halfopen, FI.point(1)])) == U.point(Q(1, 3))


def test_affine_invert_examples():
    assert affine_invert(AffineMap(1, 0)) == AffineMap(1, 0)
    assert affine_invert(AffineMap(Q(1, 2), 0)) == AffineMap(2, 0)
    assert affine_invert(AffineMap(Q(-5, 4), Q(5, 4))) == AffineMap(Q(-4, 5), 1)
    with pytest.raises(ZeroSlope):
        affine_invert(AffineMap(0, 1))


def test_normalize_examples():
    assert union_normalize([FI.closed(0, Q(1, 2)), FI.closed(Q(1, 2), 1)]) == U.closed(0, 1)
    u = union_normalize([FI.point(Q(1, 2)), FI(0, Q(1, 4), False, True)])
    assert u.parts == (FI(0, Q(1, 4), False, True), FI(Q(1, 2), Q(1, 2), True, True))
    assert union_normalize([]) == U()
    assert not U()


def test_open_ends_meeting_do_not_merge():
    u = U([FI(0, Q(1, 2), True, False), FI(Q(1, 2), 1, False, True)])
    assert len(u) == 2 and Q(1, 2) not in u
    assert U([FI(0, Q(1, 2), True, False), FI(Q(1, 2), 1, True, True)]) == U.closed(0, 1)


def test_intersect_examples():
    assert union_intersect(U.closed(0, 1), U([halfopen])) == U([halfopen])
    a = U([FI(0, Q(1, 4), False, True), FI.point(Q(1, 2))])
    b = U([FI(0, Q(1, 8), False, True), FI.point(Q(1, 4))])
    assert union_intersect(a, b) == b
    assert union_intersect(U.point(1), U([FI(0, 1, False, False)])) == U()


def test_empty_interval_rejected():
    with pytest.raises(EmptyInterval):
        FI(1, 0)
    with pytest.raises(EmptyInterval):
        FI(Q(1, 2), Q(1, 2), True, False)
    assert FI.make(1, 1, "co") is None


def test_relative_boundary():
    amb = FI.closed(0, 1)
    assert U.closed(0, Q(1, 2)).boundary(amb) == [Q(1, 2)]
    assert U.point(0).boundary(amb) == [0]
    assert U.closed(Q(1, 4), Q(3, 4)).boundary() == [Q(1, 4), Q(3, 4)]


def test_integer_log():
    assert integer_log(Q(5, 6), Q(125, 216)) == 3
    assert integer_log(Q(5, 6), Q(2, 3)) is None
    assert integer_log(Q(1, 2), Q(1)) == 0
    assert integer_log(Q(9, 10), Q(9, 10) ** 40) == 40


def test_decimal_rendering():
    assert to_decimal(Q(1, 3), 5) == "0.33333"
    assert to_decimal(Q(0)) == "0"


# properties ---------------------------------------------------------------

small = st.fractions(min_value=-4, max_value=4, max_denominator=24)


@st.composite
def intervals(draw):
    a, b = sorted((draw(small), draw(small)))
    if a == b:
        return FI.point(a)
    return FI(a, b, draw(st.booleans()), draw(st.booleans()))


unions = st.lists(intervals(), max_size=4).map(U)
maps = st.tuples(small.filter(lambda s: s != 0), small).map(lambda p: AffineMap(*p))


@given(maps, unions)
def test_affine_roundtrip(m, u):
    inv = affine_invert(m)
    assert affine_apply(m, affine_apply(inv, u)) == u
    assert inv.compose(m) == AffineMap.identity()


@given(unions, unions, unions)
def test_intersect_algebra(u, v, w):
    assert union_intersect(u, v) == union_intersect(v, u)
    assert union_intersect(union_intersect(u, v), w) == union_intersect(u, union_intersect(v, w))
    assert union_intersect(u, u) == u


@given(st.lists(intervals(), max_size=5), small)
def test_normal_form_preserves_membership(parts, x):
    u = U(parts)
    assert (x in u) == any(x in p for p in parts)
    for p, q in zip(u.parts, u.parts[1:]):
        # disjoint and not adjacent
        assert p.hi < q.lo or (p.hi == q.lo and not p.hi_closed and not q.lo_closed)


@given(st.lists(intervals(), max_size=5))
def test_normal_form_is_order_independent(parts):
    assert U(parts) == U(list(reversed(parts)))
