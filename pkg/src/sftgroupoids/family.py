"""Finite verification families.

A family over a matrix ``A`` with descriptor ``(R, Q, P)`` holds every
periodic point of period ``<= P`` plus seeded random points whose tails are
cycles of length ``<= Q`` and whose centers lie inside ``[-R, R]``.  Its
asymptotic pairs come from rewriting a random subwindow of ``[-R, R]``; they
are closed under shifting by one step either way and under swapping.

Generation is deterministic for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .asymptotics import periodic_points_upto
from .relations import AsymptoticPair, asymptotic_pair
from .sft import Point, TransitionMatrix, shift


@dataclass(frozen=True)
class FamilyDescriptor:
    radius: int = 6
    tails: int = 4
    periods: int = 6
    samples: int = 24
    seed: int = 0

    def as_dict(self) -> dict:
        return {"R": self.radius, "Q": self.tails, "P": self.periods, "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class Family:
    matrix: TransitionMatrix
    descriptor: FamilyDescriptor
    periodic: tuple
    points: tuple
    pairs: tuple = field(repr=False)

    def pairs_by_level(self) -> dict[int, list[AsymptoticPair]]:
        out: dict[int, list[AsymptoticPair]] = {}
        for p in self.pairs:
            out.setdefault(p.level, []).append(p)
        return out


def random_path(A: TransitionMatrix, start: Optional[int], end: Optional[int], length: int, rng: random.Random):
    """Random word ``s_1 .. s_length`` with ``start s_1 ... s_length end``
    admissible (``None`` leaves that side free), or None if impossible."""

    @lru_cache(maxsize=None)
    def feasible(s, rest):
        if rest == 0:
            return end is None or A.allowed(s, end)
        return any(feasible(t, rest - 1) for t in A.successors(s))

    if length == 0:
        return () if start is None or end is None or A.allowed(start, end) else None
    word = []
    prev = start
    for k in range(length):
        options = list(A.symbols) if prev is None else A.successors(prev)
        options = [s for s in options if feasible(s, length - 1 - k)]
        if not options:
            return None
        prev = rng.choice(options)
        word.append(prev)
    return tuple(word)


def random_point(A: TransitionMatrix, cycles, radius: int, rng: random.Random) -> Point:
    while True:
        u, v = rng.choice(cycles), rng.choice(cycles)
        n = rng.randint(0, 2 * radius + 1)
        lo = rng.randint(-radius, radius + 1 - n)
        w = random_path(A, u[-1], v[0], n, rng)
        if w is not None:
            return Point(u, w, lo, v)


def mutate(A: TransitionMatrix, x: Point, radius: int, rng: random.Random) -> Point:
    """A point agreeing with ``x`` outside a random subwindow of ``[-R, R]``."""
    for _ in range(20):
        a = rng.randint(-radius, radius)
        b = rng.randint(a, radius)
        w = random_path(A, x[a - 1], x[b + 1], b - a + 1, rng)
        if w is not None:
            return Point.spliced(x, a, w)
    return x


def build_family(A: TransitionMatrix, descriptor: FamilyDescriptor = FamilyDescriptor()) -> Family:
    rng = random.Random(descriptor.seed)
    periodic = periodic_points_upto(A, descriptor.periods)
    cycles = [x.right for x in periodic_points_upto(A, descriptor.tails)]
    sampled = [random_point(A, cycles, descriptor.radius, rng) for _ in range(descriptor.samples)]

    base = sampled + rng.sample(list(periodic), min(len(periodic), descriptor.samples // 2))
    raw = []
    for x in base:
        raw.append((x, x))
        for _ in range(2):
            raw.append((x, mutate(A, x, descriptor.radius, rng)))
    pairs = set()
    for x, z in raw:
        for j in (-1, 0, 1):
            p = asymptotic_pair(shift(x, j), shift(z, j))
            pairs.add(p)
            pairs.add(p.swapped())

    points = set(periodic) | set(sampled)
    for p in pairs:
        points.add(p.x)
    ordered_pairs = tuple(sorted(pairs, key=lambda p: (p.level, p.x.sort_key(), p.z.sort_key())))
    return Family(A, descriptor, periodic, tuple(sorted(points)), ordered_pairs)

