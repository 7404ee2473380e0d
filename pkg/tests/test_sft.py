import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import MATRICES, coord_raw, random_raw_point, shift_oracle, trace_oracle
from sftgroupoids.sft import (
    BracketUndefined,
    EmptyRowOrColumn,
    NonSquare,
    ParseError,
    Point,
    SFTError,
    SmaleConstants,
    bracket,
    coord,
    first_difference,
    format_point,
    metric,
    parse_matrix,
    parse_point,
    reverse,
    shift,
    validate_matrix,
)

GOLDEN = validate_matrix(MATRICES["golden"])
FULL2 = validate_matrix(MATRICES["full2"])
THREE = validate_matrix(MATRICES["three"])


def test_validate_flags():
    assert FULL2.irreducible and FULL2.non_permutation
    assert GOLDEN.irreducible and GOLDEN.non_permutation
    ident = validate_matrix([[1, 0], [0, 1]])
    assert not ident.irreducible and not ident.non_permutation
    cyc = validate_matrix([[0, 1], [1, 0]])
    assert cyc.irreducible and not cyc.non_permutation
    red = validate_matrix([[1, 1], [0, 1]])
    assert not red.irreducible


def test_validate_errors():
    with pytest.raises(NonSquare):
        validate_matrix([[1, 1]])
    with pytest.raises(EmptyRowOrColumn):
        validate_matrix([[1, 1], [0, 0]])
    with pytest.raises(EmptyRowOrColumn):
        validate_matrix([[1, 0], [1, 0]])
    with pytest.raises(SFTError):
        validate_matrix([[1, 2], [1, 1]])


def test_parse_matrix():
    assert parse_matrix("2\n1 1\n1 0\n") == GOLDEN
    with pytest.raises(ParseError, match="row 2"):
        parse_matrix("2\n1 1\n1 x\n")
    with pytest.raises(ParseError):
        parse_matrix("two\n1 1\n1 0\n")
    with pytest.raises(ParseError):
        parse_matrix("3\n1 1 1\n")
    assert parse_matrix(GOLDEN.to_text()) == GOLDEN


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_trace_matches_oracle(name):
    A = validate_matrix(MATRICES[name])
    for p in range(1, 9):
        assert A.trace_power(p) == trace_oracle(MATRICES[name], p)


def test_coord_examples():
    ones = Point.periodic((1,))
    assert coord(ones, 7) == 1
    bump = Point((1,), (2,), 0, (1,))
    assert coord(bump, 0) == 2 and coord(bump, 1) == 1 and coord(bump, -1) == 1
    alt = Point.periodic((1, 2))
    assert coord(alt, 0) == 1 and coord(alt, -1) == 2


def test_canonical_forms():
    # the same sequence written three ways
    a = Point((1, 2), (1, 2, 1, 2), -4, (1, 2))
    b = Point.periodic((1, 2))
    c = Point((2, 1, 2, 1), (), 3, (2, 1))
    assert a == b == c
    assert b.is_periodic and b.period == 2
    x = Point((1,), (1, 1, 2, 1), -2, (1,))
    assert x.center == (2,) and x.offset == 0
    assert hash(a) == hash(c)


def test_canonical_matches_raw_coordinates():
    rng = random.Random(1)
    for _ in range(300):
        A = validate_matrix(MATRICES[rng.choice(sorted(MATRICES))])
        u = tuple(rng.choice(list(A.symbols)) for _ in range(rng.randint(1, 4)))
        w = tuple(rng.choice(list(A.symbols)) for _ in range(rng.randint(0, 6)))
        v = tuple(rng.choice(list(A.symbols)) for _ in range(rng.randint(1, 4)))
        l = rng.randint(-5, 5)
        x = Point(u, w, l, v)
        for i in range(-30, 31):
            assert x[i] == coord_raw(u, w, l, v, i)
        assert len(x.left) <= len(u) and len(x.right) <= len(v)


def test_point_literal_roundtrip():
    x = parse_point("left=(2,1) center=(1,1,2)@-3 right=(1)")
    assert parse_point(format_point(x)) == x
    assert parse_point("left=(1) center=()@0 right=(1)") == Point.periodic((1,))
    with pytest.raises(ParseError):
        parse_point("left=() center=()@0 right=(1)")
    with pytest.raises(ParseError):
        parse_point("garbage")


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_shift_coordinates(name):
    A = validate_matrix(MATRICES[name])
    rng = random.Random(7)
    for _ in range(60):
        x = random_raw_point(A, rng)
        assert shift(x, 0) == x
        for n in (-5, -1, 1, 3, 7):
            y = shift(x, n)
            assert shift_oracle(y, 0, 12) == shift_oracle(x, n, 12)
            assert shift(y, -n) == x
            assert A.admits(y)
    p = Point.periodic((1, 1, 2))
    assert shift(p, 3) == p and shift(p, 1) != p


def test_metric_examples():
    lam = SmaleConstants(Fraction(1, 3))
    x = Point.periodic((1,))
    assert metric(x, x) == 0
    assert metric(x, Point((1,), (2,), 0, (1,))) == 1
    z = Point((1,), (2, 1, 1, 1, 1, 1, 2), -3, (1,))
    assert first_difference(x, z) == 3
    assert metric(x, z) == Fraction(1, 8)
    assert metric(x, z, lam) == Fraction(1, 27)
    with pytest.raises(SFTError):
        SmaleConstants(Fraction(1))


def test_metric_shift_bounds():
    rng = random.Random(3)
    lam = Fraction(1, 2)
    for _ in range(200):
        x = random_raw_point(FULL2, rng)
        z = random_raw_point(FULL2, rng)
        d, d1 = metric(x, z), metric(shift(x, 1), shift(z, 1))
        assert d1 <= d / lam
        if all(x[i] == z[i] for i in range(0, 40)):
            assert d1 <= lam * d


def test_bracket():
    x = Point((1,), (), 1, (2,))  # ...111.1222...
    z = Point((2,), (1,), 0, (1,))  # ...222.1111...
    y = bracket(x, z)
    assert y == Point.periodic((1,))
    assert bracket(x, x) == x
    with pytest.raises(BracketUndefined):
        bracket(Point.periodic((1,)), Point.periodic((2,)))


def test_bracket_laws():
    rng = random.Random(11)
    pts = [random_raw_point(FULL2, rng) for _ in range(60)]
    for x in pts:
        for z in pts[:20]:
            if x[0] != z[0]:
                continue
            y = bracket(x, z)
            assert all(y[i] == x[i] for i in range(-15, 1))
            assert all(y[i] == z[i] for i in range(0, 15))
            assert bracket(y, z) == y
            assert (bracket(y, x) == y) == all(x[i] == z[i] for i in range(0, 40))
            for w in pts[20:30]:
                if w[0] == x[0]:
                    assert bracket(x, bracket(z, w)) == bracket(x, w)
                    assert bracket(bracket(x, z), w) == bracket(x, w)


def test_reverse():
    assert reverse(Point.periodic((2,))) == Point.periodic((2,))
    x = Point.periodic((1, 2))
    y = reverse(x)
    assert all(y[i] == x[-i] for i in range(-4, 5))
    rng = random.Random(5)
    AT = THREE.transpose()
    for _ in range(100):
        x = random_raw_point(THREE, rng)
        y = reverse(x)
        assert reverse(y) == x
        assert AT.admits(y)
        assert all(y[i] == x[-i] for i in range(-20, 21))
        for n in range(-5, 6):
            assert reverse(shift(x, n)) == shift(reverse(x), -n)


symbols = st.lists(st.integers(1, 2), min_size=1, max_size=4).map(tuple)


@settings(max_examples=200, deadline=None)
@given(u=symbols, w=st.lists(st.integers(1, 2), max_size=6).map(tuple), l=st.integers(-6, 6), v=symbols)
def test_canonical_is_unique(u, w, l, v):
    x = Point(u, w, l, v)
    # re-expanding the same sequence with padded tails gives the same value
    a, b = l - 3, l + len(w) + 3
    y = Point(
        tuple(x[i] for i in range(a - 2 * len(u), a)),
        tuple(x[i] for i in range(a, b)),
        a,
        tuple(x[i] for i in range(b, b + 3 * len(v))),
    )
    assert x == y
    assert parse_point(format_point(x)) == x
