"""Equivalence levels of pairs of points and the groupoids G^a and G^a x| Z.

Levels follow the SFT instantiation of the inductive systems:

* ``(x, z)`` is in the stable level ``n`` iff ``x_i == z_i`` for all ``i >= n``,
* in the unstable level ``n`` iff ``x_i == z_i`` for all ``i <= -n``,
* in the asymptotic level ``n`` iff both, i.e. agreement on ``|i| >= n``.

A groupoid element ``(x, n, z)`` carries the sign ``s`` of the homeomorphism
``sigma^s`` it is taken for, so the same code handles ``(X_A, sigma)`` and
``(X_A, sigma^-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .sft import Point, SFTError, is_rotation, shift


class NotAsymptotic(SFTError):
    pass


class NotComposable(SFTError):
    pass


def stable_level(x: Point, z: Point) -> Optional[int]:
    """Least ``n >= 0`` with ``x_i == z_i`` for every ``i >= n``, or None."""
    if x == z:
        return 0
    if not is_rotation(x.right, z.right):
        return None
    q = len(x.right)
    start = max(x.tail_start, z.tail_start)
    if any(x[start + j] != z[start + j] for j in range(q)):
        return None
    i = start - 1
    while i >= 0 and x[i] == z[i]:
        i -= 1
    return max(i + 1, 0)


def unstable_level(x: Point, z: Point) -> Optional[int]:
    """Least ``n >= 0`` with ``x_i == z_i`` for every ``i <= -n``, or None."""
    if x == z:
        return 0
    if not is_rotation(x.left, z.left):
        return None
    p = len(x.left)
    end = min(x.offset, z.offset) - 1
    if any(x[end - j] != z[end - j] for j in range(p)):
        return None
    i = end + 1
    while i <= 0 and x[i] == z[i]:
        i += 1
    return 0 if i > 0 else 1 - i


def asymptotic_level(x: Point, z: Point) -> Optional[int]:
    s = stable_level(x, z)
    if s is None:
        return None
    u = unstable_level(x, z)
    if u is None:
        return None
    return max(s, u)


@dataclass(frozen=True)
class LevelWitness:
    kind: str
    level: int


def witness(kind: str, x: Point, z: Point) -> Optional[LevelWitness]:
    fn = {"stable": stable_level, "unstable": unstable_level, "asymptotic": asymptotic_level}[kind]
    n = fn(x, z)
    return None if n is None else LevelWitness(kind, n)


@dataclass(frozen=True)
class AsymptoticPair:
    x: Point
    z: Point
    level: int

    def shifted(self, n: int) -> "AsymptoticPair":
        return asymptotic_pair(shift(self.x, n), shift(self.z, n))

    def swapped(self) -> "AsymptoticPair":
        return AsymptoticPair(self.z, self.x, self.level)


def asymptotic_pair(x: Point, z: Point) -> AsymptoticPair:
    n = asymptotic_level(x, z)
    if n is None:
        raise NotAsymptotic(f"({x}, {z}) is not asymptotic")
    return AsymptoticPair(x, z, n)


@dataclass(frozen=True)
class GroupoidElement:
    """``(x, n, z)`` with ``(phi^n(x), z)`` asymptotic, ``phi = sigma^sign``."""

    x: Point
    n: int
    z: Point
    level: int
    sign: int = 1

    @property
    def range(self) -> Point:
        return self.x

    @property
    def source(self) -> Point:
        return self.z

    @property
    def witness(self) -> AsymptoticPair:
        return AsymptoticPair(shift(self.x, self.sign * self.n), self.z, self.level)


def make_element(x: Point, n: int, z: Point, sign: int = 1) -> GroupoidElement:
    level = asymptotic_level(shift(x, sign * n), z)
    if level is None:
        raise NotAsymptotic(f"({x}, {n}, {z}) is not in G^a x| Z")
    return GroupoidElement(x, n, z, level, sign)


def unit(x: Point, sign: int = 1) -> GroupoidElement:
    return GroupoidElement(x, 0, x, 0, sign)


def compose(g: GroupoidElement, h: GroupoidElement) -> GroupoidElement:
    if g.sign != h.sign or g.z != h.x:
        raise NotComposable("source of the first element is not the range of the second")
    return make_element(g.x, g.n + h.n, h.z, g.sign)


def inverse(g: GroupoidElement) -> GroupoidElement:
    return make_element(g.z, -g.n, g.x, g.sign)


def gamma(g: GroupoidElement) -> tuple[AsymptoticPair, int]:
    """``(x, n, z) -> ((x, phi^-n(z)), n)``."""
    return asymptotic_pair(g.x, shift(g.z, -g.sign * g.n)), g.n


def gamma_inv(pair: AsymptoticPair, n: int, sign: int = 1) -> GroupoidElement:
    if asymptotic_level(pair.x, pair.z) is None:
        raise NotAsymptotic("pair is not in G^a")
    return make_element(pair.x, n, shift(pair.z, sign * n), sign)


def d_hom(g: GroupoidElement) -> int:
    return g.n
