"""Periodic points and the limiting behaviour of orbits.

Every representable point has periodic tails, so every point is
asymptotically periodic and the quantities below are total.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .relations import asymptotic_level
from .sft import Point, SFTError, TransitionMatrix, first_difference, shift


class HorizonTooSmall(SFTError):
    pass


class RecurrenceMismatch(AssertionError):
    pass


def enumerate_periodic(A: TransitionMatrix, p: int) -> tuple[Point, ...]:
    """All points fixed by ``sigma^p`` (non-primitive periods included)."""
    if p < 1:
        raise SFTError("period must be positive")
    pts = [Point.periodic(w) for w in A.words(p) if A.allowed(w[-1], w[0])]
    return tuple(sorted(pts))


def periodic_points_upto(A: TransitionMatrix, P: int) -> tuple[Point, ...]:
    seen = set()
    for p in range(1, P + 1):
        seen.update(enumerate_periodic(A, p))
    return tuple(sorted(seen))


def least_asymptotic_period(x: Point) -> int:
    return lcm(len(x.left), len(x.right))


def least_asymptotic_period_search(x: Point, bound: int = None) -> int:
    """Same quantity by direct search over ``p = 1, 2, ...``."""
    bound = bound or len(x.left) * len(x.right)
    for p in range(1, bound + 1):
        if asymptotic_level(shift(x, p), x) is not None:
            return p
    raise AssertionError(f"no asymptotic period up to {bound}")


def eta_s(x: Point) -> Point:
    """Forward limit point: the right tail continued in both directions."""
    return Point.periodic(x.right, x.tail_start)


def eta_u(x: Point) -> Point:
    """Backward limit point: the left tail continued in both directions."""
    return Point.periodic(x.left, x.offset)


@dataclass(frozen=True)
class LimitData:
    eta_s: Point
    p_s: int
    eta_u: Point
    p_u: int
    least_asymptotic_period: int


def limit_data(x: Point) -> LimitData:
    s, u = eta_s(x), eta_u(x)
    return LimitData(s, s.period, u, u.period, lcm(s.period, u.period))


def orbit(x: Point) -> tuple[Point, ...]:
    return tuple(sorted(shift(x, j) for j in range(x.period)))


def omega_limit(x: Point) -> tuple[Point, ...]:
    return orbit(eta_s(x))


def alpha_limit(x: Point) -> tuple[Point, ...]:
    return orbit(eta_u(x))


def _limit_oracle(x: Point, horizon: int, A: TransitionMatrix, direction: int):
    need = 2 * x.span + 4 * least_asymptotic_period(x)
    if horizon <= need:
        raise HorizonTooSmall(f"horizon {horizon} must exceed {need}")
    tails = max(len(x.left), len(x.right))
    candidates = [c for p in range(1, tails + 1) for c in enumerate_periodic(A, p)]
    found = set()
    for n in range(horizon // 2, horizon + 1):
        y = shift(x, direction * n)
        # the nearest periodic candidate agrees on the widest symmetric window
        best = max(candidates, key=lambda c: _agreement(c, y))
        found.add(best)
    return tuple(sorted(found))


def _agreement(c: Point, y: Point) -> float:
    k = first_difference(c, y)
    return float("inf") if k is None else k


def brute_force_omega(x: Point, horizon: int, A: TransitionMatrix) -> tuple[Point, ...]:
    """Accumulation points of ``sigma^n(x)`` for ``n`` in ``[horizon/2, horizon]``,
    each matched to the periodic point it is metrically closest to."""
    return _limit_oracle(x, horizon, A, 1)


def brute_force_alpha(x: Point, horizon: int, A: TransitionMatrix) -> tuple[Point, ...]:
    return _limit_oracle(x, horizon, A, -1)


def default_horizon(x: Point) -> int:
    return 2 * x.span + 4 * least_asymptotic_period(x) + 2


def recurrence_conditions(x: Point) -> dict[str, bool]:
    """The four equivalent characterizations of periodicity, evaluated
    independently of each other."""
    om, al = set(omega_limit(x)), set(alpha_limit(x))
    forward = {shift(x, j) for j in range(len(om))}
    return {
        "in_omega_or_alpha": x in om or x in al,
        "periodic": shift(x, len(x.right)) == x,
        "omega_eq_alpha_eq_orbit": om == al == forward,
        "recurrent": x in om and x in al,
    }


def classify_recurrent(x: Point) -> bool:
    conds = recurrence_conditions(x)
    if len(set(conds.values())) != 1:
        raise RecurrenceMismatch(f"recurrence conditions disagree at {x}: {conds}")
    return conds["recurrent"]
