from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import orbit_contains
from qmarkov import systems
from qmarkov.errors import (
    EndpointMissing,
    LimitMismatch,
    MemberPoint,
    NotContraction,
    NotOrderIsomorphic,
    OutOfAmbient,
    OverlapError,
)
from qmarkov.markov_set import (
    GeometricTail,
    MarkovSet,
    OrderIso,
    ms_component,
    ms_contains,
    ms_enumerate,
    ms_order_iso,
    ms_validate,
)
from qmarkov.numerics import AffineMap, FlaggedInterval

UNIT = FlaggedInterval.closed(0, 1)
A_DESC = {"ambient": ["0", "1"], "points": ["0", "3/5", "1"], "tails": [{"seed": "1/2", "slope": "5/6", "intercept": "0", "limit": "0"}]}
B_DESC = {"ambient": ["0", "1"], "points": ["0", "2/3", "1"], "tails": [{"seed": "3/5", "slope": "9/10", "intercept": "0", "limit": "0"}]}


@pytest.fixture
def A():
    return ms_validate(A_DESC)


def test_validate_examples(A):
    two = ms_validate({"ambient": ["0", "1"], "points": ["0", "1"]})
    assert two.points == (0, 1) and not two.tails
    assert A.points == (0, Q(3, 5), 1)
    with pytest.raises(NotContraction):
        ms_validate({"ambient": ["0", "1"], "points": ["0", "1"], "tails": [{"seed": "1/2", "slope": "2", "intercept": "0", "limit": "0"}]})


def test_validate_errors():
    with pytest.raises(EndpointMissing, match="adjoined"):
        ms_validate({"ambient": ["0", "1"], "points": ["0", "3/5"], "tails": A_DESC["tails"]})
    with pytest.raises(LimitMismatch):
        GeometricTail(Q(1, 2), AffineMap(Q(5, 6), 0), Q(1, 10))
    with pytest.raises(OverlapError):
        MarkovSet(UNIT, (0, Q(1, 3), 1), (GeometricTail(Q(1, 2), AffineMap(Q(1, 2), 0), Q(0)),))
    with pytest.raises(OverlapError):
        halves = AffineMap(Q(1, 2), 0)
        MarkovSet(UNIT, (0, 1), (GeometricTail(Q(1, 2), halves, Q(0)), GeometricTail(Q(3, 4), halves, Q(0))))
    with pytest.raises(OutOfAmbient):
        MarkovSet(UNIT, (0, 2, 1), ())


def test_orbit_points_are_deduplicated(A):
    again = MarkovSet(UNIT, (0, Q(25, 72), Q(3, 5), 1), A.tails)
    assert again.points == A.points


def test_contains_examples(A):
    assert ms_contains(A, Q(25, 72))
    assert not ms_contains(A, Q(1, 3))
    assert ms_contains(A, 0) and ms_contains(A, 1)
    with pytest.raises(OutOfAmbient):
        ms_contains(A, 2)


def test_component_examples(A):
    assert ms_component(A, Q(7, 10)) == (Q(3, 5), 1)
    assert ms_component(A, Q(11, 24)) == (Q(5, 12), Q(1, 2))
    assert ms_component(ms_validate({"ambient": ["0", "1"], "points": ["0", "1"]}), Q(1, 2)) == (0, 1)
    with pytest.raises(MemberPoint):
        ms_component(A, Q(3, 5))


def test_enumerate_examples(A):
    assert ms_enumerate(ms_validate({"ambient": ["0", "1"], "points": ["0", "1"]}), 5) == [0, 1]
    assert ms_enumerate(A, 2) == [0, Q(5, 12), Q(1, 2), Q(3, 5), 1]
    assert ms_enumerate(systems.halving().markov_set(1), 3) == [0, Q(1, 8), Q(1, 4), Q(1, 2), 1]


def test_order_iso_examples(A):
    B = ms_validate(B_DESC)
    assert ms_order_iso(A, A).is_identity
    tau = ms_order_iso(A, B)
    assert (tau(0), tau(1), tau(Q(3, 5))) == (0, 1, Q(2, 3))
    for k in range(8):
        assert tau(Q(1, 2) * Q(5, 6) ** k) == Q(3, 5) * Q(9, 10) ** k
    with pytest.raises(NotOrderIsomorphic):
        ms_order_iso(ms_validate({"ambient": ["0", "1"], "points": ["0", "1/2", "1"]}), ms_validate({"ambient": ["0", "1"], "points": ["0", "1"]}))


def test_same_set_two_descriptions_match():
    # the seed 1/2 listed as a point and the orbit started one step later
    shifted = MarkovSet(UNIT, (0, Q(1, 2), Q(3, 5), 1), (GeometricTail(Q(5, 12), AffineMap(Q(5, 6), 0), Q(0)),))
    A = ms_validate(A_DESC)
    iso = ms_order_iso(A, shifted)
    for x in ms_enumerate(A, 10):
        assert iso(x) == x


def test_iso_inverse_and_compose(A):
    B = ms_validate(B_DESC)
    tau = ms_order_iso(A, B)
    back = tau.inverse()
    for x in ms_enumerate(A, 12):
        assert back(tau(x)) == x
    assert back.compose(tau) == OrderIso.identity(A)
    tau.check()


# oracle agreement -----------------------------------------------------------

def _oracle_args(S):
    return set(S.points), [(t.seed, t.generator.slope, t.generator.intercept, t.limit) for t in S.tails]


@pytest.mark.parametrize("name", sorted(systems.bundled()))
def test_contains_matches_orbit_oracle(name):
    S = systems.bundled()[name].markov_set(1)
    pts, tails = _oracle_args(S)
    rng = random.Random(name)
    queries = [Q(rng.randint(0, d), d) for d in (rng.randint(1, 400) for _ in range(600))]
    queries += [x for x in ms_enumerate(S, 30)]
    for t in S.tails:
        queries += [t.element(k) + Q(1, 10 ** 6) for k in range(20)]
    for x in queries:
        if x in S.ambient:
            assert ms_contains(S, x) == orbit_contains(pts, tails, x), x


@given(st.fractions(min_value=0, max_value=1, max_denominator=500))
def test_component_has_no_member_inside(x):
    S = ms_validate(A_DESC)
    if ms_contains(S, x):
        return
    a, b = ms_component(S, x)
    assert a < x < b and ms_contains(S, a) and ms_contains(S, b)
    # enough depth that further tail elements fall below a
    inside = [y for y in ms_enumerate(S, 200) if a < y < b]
    assert not inside


@given(st.integers(min_value=1, max_value=25))
def test_canonical_iso_is_increasing(depth):
    A, B = ms_validate(A_DESC), ms_validate(B_DESC)
    tau = ms_order_iso(A, B)
    xs = ms_enumerate(A, depth)
    ys = [tau(x) for x in xs]
    assert ys == sorted(set(ys))
    assert ys[0] == 0 and ys[-1] == 1
    assert all(ms_contains(B, y) for y in ys)
