import random

import pytest

from oracles import MATRICES, periodic_count_oracle, random_raw_point, trace_oracle
from sftgroupoids.asymptotics import (
    HorizonTooSmall,
    alpha_limit,
    brute_force_alpha,
    brute_force_omega,
    classify_recurrent,
    default_horizon,
    enumerate_periodic,
    eta_s,
    eta_u,
    least_asymptotic_period,
    least_asymptotic_period_search,
    limit_data,
    omega_limit,
    orbit,
    recurrence_conditions,
)
from sftgroupoids.family import build_family
from sftgroupoids.relations import stable_level, unstable_level
from sftgroupoids.sft import Point, SFTError, first_difference, shift, validate_matrix

FULL2 = validate_matrix(MATRICES["full2"])


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_periodic_counts(name):
    A = validate_matrix(MATRICES[name])
    for p in range(1, 9):
        pts = enumerate_periodic(A, p)
        assert len(pts) == len(set(pts)) == trace_oracle(MATRICES[name], p)
        if p <= 6:
            assert len(pts) == periodic_count_oracle(MATRICES[name], p)
        assert all(shift(x, p) == x and A.admits(x) for x in pts)
    with pytest.raises(SFTError):
        enumerate_periodic(A, 0)


def test_periodic_examples():
    golden = validate_matrix(MATRICES["golden"])
    assert enumerate_periodic(golden, 1) == (Point.periodic((1,)),)
    assert len(enumerate_periodic(golden, 2)) == 3
    assert len(enumerate_periodic(FULL2, 3)) == 8


def test_least_asymptotic_period_examples():
    assert least_asymptotic_period(Point.periodic((1, 1, 2))) == 3
    x = Point((1,), (2,), 0, (1, 2))
    assert least_asymptotic_period(x) == 2 == least_asymptotic_period_search(x)
    y = Point((1, 1, 2), (2,), 0, (1, 2))
    assert least_asymptotic_period(y) == 6 == least_asymptotic_period_search(y)


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_limit_data_properties(name):
    A = validate_matrix(MATRICES[name])
    rng = random.Random(6)
    for _ in range(80):
        x = random_raw_point(A, rng)
        ld = limit_data(x)
        assert shift(ld.eta_s, ld.p_s) == ld.eta_s
        assert all(shift(ld.eta_s, q) != ld.eta_s for q in range(1, ld.p_s))
        assert shift(ld.eta_u, ld.p_u) == ld.eta_u
        assert ld.least_asymptotic_period == least_asymptotic_period_search(x)
        assert stable_level(x, ld.eta_s) is not None
        assert unstable_level(x, ld.eta_u) is not None
        assert stable_level(shift(x, ld.p_s), x) is not None
        assert unstable_level(shift(x, ld.p_u), x) is not None
        assert eta_s(shift(x, 1)) == shift(eta_s(x), 1)
        assert eta_u(shift(x, -1)) == shift(eta_u(x), -1)
        assert len(omega_limit(x)) == ld.p_s


def test_eta_examples():
    x = Point((1,), (2,), 0, (1,))
    assert eta_s(x) == eta_u(x) == Point.periodic((1,))
    assert omega_limit(x) == (Point.periodic((1,)),)
    # the forward orbit converges to eta_s
    assert [first_difference(shift(x, k), eta_s(x)) for k in range(1, 21)] == list(range(1, 21))
    p = Point.periodic((1, 2, 2))
    assert eta_s(p) == eta_u(p) == p
    assert omega_limit(p) == alpha_limit(p) == orbit(p)


@pytest.mark.parametrize("name", sorted(MATRICES))
def test_brute_force_limits(name):
    A = validate_matrix(MATRICES[name])
    rng = random.Random(8)
    for _ in range(30):
        x = random_raw_point(A, rng)
        H = default_horizon(x)
        assert brute_force_omega(x, H, A) == omega_limit(x)
        assert brute_force_alpha(x, H, A) == alpha_limit(x)


def test_horizon_too_small():
    x = Point((1,), (2,), 0, (1,))
    with pytest.raises(HorizonTooSmall):
        brute_force_omega(x, 3, FULL2)


def test_recurrence():
    assert classify_recurrent(Point.periodic((1, 2)))
    assert not classify_recurrent(Point((1,), (2,), 0, (1,)))
    for name in sorted(MATRICES):
        fam = build_family(validate_matrix(MATRICES[name]))
        for x in fam.points:
            conds = recurrence_conditions(x)
            assert len(set(conds.values())) == 1
            assert classify_recurrent(x) == x.is_periodic
