import random

import pytest

from oracles import MATRICES, potential_sum_oracle, random_raw_point
from sftgroupoids.cocycles import (
    LocallyConstantFn,
    MissingWord,
    PotentialCocycle,
    check_condition_1,
    check_one_cocycle,
    constancy_on_family,
    eval_lc,
    eval_two_cocycle,
    format_table,
    parse_table,
    power_sum,
)
from sftgroupoids.family import build_family
from sftgroupoids.relations import asymptotic_pair
from sftgroupoids.sft import ParseError, Point, shift, validate_matrix

FULL2 = validate_matrix(MATRICES["full2"])
GOLDEN = validate_matrix(MATRICES["golden"])
SYM = LocallyConstantFn.from_symbols(FULL2, {1: 1, 2: 2})


def random_table(A, radius, rng, lo=-2, hi=3):
    return LocallyConstantFn.from_function(A, radius, lambda w: rng.randint(lo, hi))


def composable_triples(fam, limit=3000):
    by_x = {}
    for p in fam.pairs:
        by_x.setdefault(p.x, []).append(p.z)
    out = []
    for x in sorted(by_x):
        for y in by_x[x]:
            for w in by_x.get(y, []):
                out.append((x, y, w))
    return out[:limit]


def test_eval_examples():
    x = Point.periodic((2,))
    assert eval_lc(LocallyConstantFn.constant(FULL2, 1), x) == 1
    assert eval_lc(SYM, x) == 2
    f = random_table(FULL2, 1, random.Random(0))
    y = Point((1,), (2, 1, 2, 2), -1, (2,))
    for j in range(-4, 5):
        assert f.at(y, j) == f.table[tuple(shift(y, j)[i] for i in (-1, 0, 1))]


def test_missing_word():
    with pytest.raises(MissingWord):
        LocallyConstantFn(GOLDEN, 1, {(1, 1, 1): 0})


def test_power_sum_examples():
    one = LocallyConstantFn.constant(FULL2, 1)
    x = Point.periodic((1, 2))
    for n in range(-5, 6):
        assert power_sum(one, x, n) == n
    assert power_sum(SYM, x, 0) == 0
    assert power_sum(SYM, x, 2) == 3
    assert power_sum(SYM, x, -1) == -2
    assert power_sum(SYM, x, 2, step=-1) == 3


@pytest.mark.parametrize("step", [1, -1])
def test_one_cocycle(step):
    fam = build_family(GOLDEN)
    f = random_table(GOLDEN, 1, random.Random(1))
    assert check_one_cocycle(f, fam.points[:40], 6, step).passed

    def corrupted(n, x):
        return power_sum(f, x, n, step) + (1 if n == 2 else 0)

    rep = check_one_cocycle(corrupted, fam.points[:5], 3, step)
    assert not rep.passed and rep.counterexample is not None
    assert check_one_cocycle(lambda n, x: 0, [Point.periodic((1,))], 0).checked == 1


@pytest.mark.parametrize("span", ["forward", "full"])
def test_two_cocycle_identity(span):
    fam = build_family(GOLDEN)
    d = PotentialCocycle(random_table(GOLDEN, 1, random.Random(2)), span)
    for x, y, w in composable_triples(fam):
        assert d(x, y) + d(y, w) == d(x, w)
    for p in fam.pairs[::5]:
        assert eval_two_cocycle(d, p) == potential_sum_oracle(d.g, p.x, p.z, span)
        assert d(p.x, p.x) == 0


def test_two_cocycle_examples():
    x = Point.periodic((1,))
    z = Point((1,), (2,), 0, (1,))
    p = asymptotic_pair(x, z)
    assert eval_two_cocycle(PotentialCocycle.zero(FULL2), p) == 0
    assert eval_two_cocycle(PotentialCocycle(SYM, "full"), p) == -1
    assert eval_two_cocycle(PotentialCocycle(SYM), p) == -1


def test_potential_shift_behaviour():
    fam = build_family(GOLDEN)
    g = random_table(GOLDEN, 1, random.Random(3))
    fwd, full = PotentialCocycle(g), PotentialCocycle(g, "full")
    for p in fam.pairs:
        x1, z1 = shift(p.x, 1), shift(p.z, 1)
        assert fwd(p.x, p.z) - fwd(x1, z1) == g(p.x) - g(p.z)
        assert full(x1, z1) == full(p.x, p.z)


def test_condition_1_examples():
    fam = build_family(GOLDEN)
    rng = random.Random(4)
    g = random_table(GOLDEN, 1, rng)
    c = g.shifted_sum(LocallyConstantFn.constant(GOLDEN, 3))
    rep = check_condition_1(c, PotentialCocycle(g), fam.pairs)
    assert rep.passed and not rep.divergent

    rep = check_condition_1(LocallyConstantFn.constant(GOLDEN, 1), PotentialCocycle.zero(GOLDEN), fam.pairs)
    assert rep.passed

    nonconst = LocallyConstantFn.from_symbols(GOLDEN, {1: 1, 2: 2})
    rep = check_condition_1(nonconst, PotentialCocycle.zero(GOLDEN), fam.pairs)
    assert not rep.passed and not rep.divergent
    ce = rep.formulations["iv"].counterexample
    assert ce["lhs"] != ce["rhs"]


def test_full_span_potential_breaks_condition_1():
    fam = build_family(GOLDEN)
    g = LocallyConstantFn.from_symbols(GOLDEN, {1: 0, 2: 1})
    rep = check_condition_1(g, PotentialCocycle(g, "full"), fam.pairs)
    assert not rep.passed


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_five_formulations_agree(name):
    A = validate_matrix(MATRICES[name])
    fam = build_family(A)
    rng = random.Random(5)
    for trial in range(4):
        g = random_table(A, rng.randint(0, 1), rng)
        if trial % 2:
            c = g.shifted_sum(LocallyConstantFn.constant(A, rng.randint(-2, 2)))
        else:
            c = random_table(A, 0, rng)
        rep = check_condition_1(c, PotentialCocycle(g), fam.pairs)
        assert not rep.divergent, {k: v.passed for k, v in rep.formulations.items()}


def test_constancy_when_d_vanishes():
    fam = build_family(FULL2)
    c = LocallyConstantFn.constant(FULL2, -1)
    assert check_condition_1(c, PotentialCocycle.zero(FULL2), fam.pairs).passed
    assert constancy_on_family(c, fam.points) == 0
    rng = random.Random(6)
    for _ in range(10):
        c = random_table(FULL2, 1, rng)
        if check_condition_1(c, PotentialCocycle.zero(FULL2), fam.pairs).passed:
            assert constancy_on_family(c, fam.points) == 0


def test_table_file_roundtrip():
    f = random_table(GOLDEN, 1, random.Random(7))
    text = format_table(f)
    assert parse_table(text, GOLDEN).table == f.table
    with pytest.raises(ParseError, match="line 2"):
        parse_table("1\n1,1,1 = 3\n", GOLDEN)
    with pytest.raises(MissingWord):
        parse_table("0\n1 -> 1\n", GOLDEN)


def test_random_points_evaluate():
    rng = random.Random(8)
    f = random_table(GOLDEN, 2, rng)
    for _ in range(50):
        x = random_raw_point(GOLDEN, rng)
        assert f(x) == f.table[x.window(-2, 2)]
