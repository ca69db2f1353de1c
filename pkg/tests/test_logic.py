import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ic3pl.logic import (Clause, Cube, diff, from_dimacs, make_lit, neg, negate, subsumes,
                         to_dimacs)
from oracles import cube_implies, cubes_conflict

NV = 6


def x(v):
    return make_lit(v)


def nx(v):
    return make_lit(v, True)


@st.composite
def cubes(draw, nvars=NV, min_size=1):
    vs = draw(st.lists(st.integers(1, nvars), unique=True, min_size=min_size, max_size=nvars))
    return Cube(make_lit(v, draw(st.booleans())) for v in vs)


def test_literal_encoding():
    assert x(3) == 6 and nx(3) == 7
    assert neg(neg(x(5))) == x(5)
    assert to_dimacs(nx(4)) == -4 and from_dimacs(-4) == nx(4)


def test_canonical_order_and_equality():
    a = Cube([nx(3), x(1), x(2)])
    b = Cube([x(2), nx(3), x(1)])
    assert a == b and hash(a) == hash(b)
    assert a.lits == (x(1), x(2), nx(3))
    assert Cube([x(1)]) != Clause([x(1)])


@pytest.mark.parametrize("lits", [[x(1), nx(1)], [0], [1]])
def test_rejects_bad_literal_sets(lits):
    with pytest.raises(ValueError):
        Cube(lits)


def test_negate_examples():
    assert negate(Cube([x(1), nx(2)])) == Clause([nx(1), x(2)])
    c = Cube([x(1), x(3)])
    assert negate(negate(c)) == c
    assert negate(Cube()) == Clause() and len(negate(Cube())) == 0


@pytest.mark.parametrize("a,b,expected", [
    ([x(1)], [x(1), x(2)], True),
    ([x(1), nx(2)], [x(1), x(2)], False),
    ([], [x(1)], True),
])
def test_subsumes_examples(a, b, expected):
    assert subsumes(Cube(a), Cube(b)) is expected


@pytest.mark.parametrize("a,b,expected", [
    ([x(1), nx(3)], [nx(1), x(2)], {x(1)}),
    ([x(1), x(2), x(3)], [nx(1), nx(2), x(3)], {x(1), x(2)}),
])
def test_diff_examples(a, b, expected):
    assert diff(Cube(a), Cube(b)) == expected


@given(cubes())
def test_diff_with_self_is_empty(c):
    assert diff(c, c) == frozenset()


def test_diff_asymmetry_witness():
    a, b = Cube([x(1), x(2)]), Cube([nx(1)])
    assert diff(a, b) != diff(b, a)


@given(cubes(min_size=0))
def test_negate_involution(c):
    assert negate(negate(c)) == c
    assert set(negate(c).vars()) == set(c.vars())


@settings(max_examples=300)
@given(cubes(), cubes())
def test_conflict_iff_nonempty_diff(a, b):
    assert cubes_conflict(a, b, NV) == bool(diff(a, b))


@settings(max_examples=300)
@given(cubes(), cubes(), cubes())
def test_diff_propagates_to_sub_cubes(a, b, c):
    d = diff(a, b)
    if d and c.literal_set & d:
        assert diff(c, b)


@settings(max_examples=300)
@given(cubes(), cubes())
def test_implication_iff_subset(a, b):
    assert cube_implies(a, b, NV) == b.issubset(a)
