"""Two-sided shifts of finite type over 0/1 matrices.

Points are eventually periodic bi-infinite sequences stored as
``(left tail, center, offset, right tail)``.  Every :class:`Point` is kept
in a canonical form, so ``==`` is equality of sequences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


class SFTError(ValueError):
    pass


class NonSquare(SFTError):
    pass


class EmptyRowOrColumn(SFTError):
    pass


class ParseError(SFTError):
    pass


class Inadmissible(SFTError):
    pass


class BracketUndefined(SFTError):
    pass


def primitive_root(word: tuple) -> tuple:
    """Shortest ``r`` with ``word == r * k``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def is_rotation(a: tuple, b: tuple) -> bool:
    return len(a) == len(b) and any(a[k:] + a[:k] == b for k in range(len(a)))


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple
    irreducible: bool
    non_permutation: bool

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def symbols(self) -> range:
        return range(1, self.size + 1)

    def allowed(self, a: int, b: int) -> bool:
        return self.entries[a - 1][b - 1] == 1

    def successors(self, a: int) -> list[int]:
        return [b for b in self.symbols if self.allowed(a, b)]

    def transpose(self) -> "TransitionMatrix":
        return validate_matrix([list(col) for col in zip(*self.entries)])

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)

    def trace_power(self, p: int) -> int:
        """trace(A^p), exact."""
        return int(np.trace(np.linalg.matrix_power(self.array(), p)))

    def words(self, length: int) -> Iterator[tuple]:
        """All admissible words of the given length, lexicographic."""
        if length <= 0:
            yield ()
            return
        stack = [(a,) for a in reversed(self.symbols)]
        while stack:
            w = stack.pop()
            if len(w) == length:
                yield w
                continue
            for b in reversed(self.successors(w[-1])):
                stack.append(w + (b,))

    def admits_word(self, word: Sequence[int]) -> bool:
        return all(1 <= s <= self.size for s in word) and all(
            self.allowed(a, b) for a, b in zip(word, word[1:])
        )

    def admits(self, x: "Point") -> bool:
        lo = x.offset - len(x.left) - 1
        hi = x.tail_start + len(x.right)
        return self.admits_word([x[i] for i in range(lo, hi + 1)])

    def check(self, x: "Point") -> "Point":
        if not self.admits(x):
            raise Inadmissible(f"{format_point(x)} is not admissible")
        return x

    def to_text(self) -> str:
        rows = [" ".join(str(b) for b in row) for row in self.entries]
        return "\n".join([str(self.size)] + rows) + "\n"


def validate_matrix(raw) -> TransitionMatrix:
    rows = [list(r) for r in raw]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NonSquare(f"matrix is not square: row lengths {[len(r) for r in rows]}")
    for r in rows:
        for b in r:
            if b not in (0, 1):
                raise SFTError(f"entry {b!r} is not a bit")
    a = np.array(rows, dtype=np.int64)
    for i in range(n):
        if not a[i].any():
            raise EmptyRowOrColumn(f"row {i + 1} is zero")
        if not a[:, i].any():
            raise EmptyRowOrColumn(f"column {i + 1} is zero")
    # strongly connected iff (I + A)^(n-1) has no zero entry
    reach = np.linalg.matrix_power(((np.eye(n, dtype=np.int64) + a) > 0).astype(np.int64), max(n - 1, 1))
    irreducible = bool((reach > 0).all())
    non_permutation = bool((a.sum(axis=1) >= 2).any() or (a.sum(axis=0) >= 2).any())
    return TransitionMatrix(tuple(tuple(int(b) for b in r) for r in rows), irreducible, non_permutation)


def parse_matrix(text: str) -> TransitionMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"line 1: expected the matrix size, got {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows after the size line, found {len(lines) - 1}")
    rows = []
    for k, ln in enumerate(lines[1:], start=1):
        parts = ln.split()
        if len(parts) != n or any(p not in ("0", "1") for p in parts):
            raise ParseError(f"row {k}: expected {n} space-separated bits, got {ln!r}")
        rows.append([int(p) for p in parts])
    return validate_matrix(rows)


# ---------------------------------------------------------------------------
# points


def _raw_coord(u, w, l, v, i):
    t = l + len(w)
    if i < l:
        return u[(i - l) % len(u)]
    if i < t:
        return w[i - l]
    return v[(i - t) % len(v)]


def _canonical(u, w, l, v):
    u, v = primitive_root(tuple(u)), primitive_root(tuple(v))
    w = tuple(w)
    p, q = len(u), len(v)

    def x(i):
        return _raw_coord(u, w, l, v, i)

    t = l + len(w)
    floor = l - p - q - 1
    right_start = t
    while right_start > floor and x(right_start - 1) == x(right_start - 1 + q):
        right_start -= 1
    if right_start <= floor:
        # q-periodic on a window of length >= p + q inside the left tail,
        # hence periodic everywhere
        word = tuple(x(j) for j in range(q))
        return word, (), 0, word
    left_end = l - 1
    ceiling = t + p + q + 1
    while x(left_end + 1) == x(left_end + 1 - p):
        left_end += 1
        if left_end > ceiling:
            raise AssertionError("left merge scan did not terminate")
    if left_end + 1 < right_start:
        nl = left_end + 1
        center = tuple(x(i) for i in range(nl, right_start))
    else:
        nl = right_start
        center = ()
    left = tuple(x(i) for i in range(nl - p, nl))
    right = tuple(x(i) for i in range(right_start, right_start + q))
    return left, center, nl, right


@dataclass(frozen=True)
class Point:
    """Eventually periodic sequence ``... u u u w v v v ...``.

    ``center`` occupies indices ``offset .. offset + len(center) - 1``; the
    left tail ends at ``offset - 1`` and the right tail starts right after
    the center.  Construction always normalizes: tails become primitive and
    the center minimal.  A periodic point is stored as ``(w, (), 0, w)``.
    """

    left: tuple
    center: tuple
    offset: int
    right: tuple

    def __post_init__(self):
        if not self.left or not self.right:
            raise SFTError("tails must be nonempty")
        u, w, l, v = _canonical(self.left, self.center, self.offset, self.right)
        object.__setattr__(self, "left", u)
        object.__setattr__(self, "center", w)
        object.__setattr__(self, "offset", l)
        object.__setattr__(self, "right", v)

    @classmethod
    def _trusted(cls, left, center, offset, right) -> "Point":
        # caller guarantees the fields are already canonical
        x = object.__new__(cls)
        for k, v in (("left", left), ("center", center), ("offset", offset), ("right", right)):
            object.__setattr__(x, k, v)
        return x

    @classmethod
    def periodic(cls, word, offset: int = 0) -> "Point":
        """The point with ``x[offset + j] = word[j mod len(word)]``."""
        word = tuple(word)
        return cls(word, (), offset, word)

    @classmethod
    def spliced(cls, x: "Point", lo: int, values: Sequence[int]) -> "Point":
        """Copy of ``x`` with coordinates ``lo, lo+1, ...`` replaced by ``values``."""
        hi = lo + len(values)
        a, b = min(lo, x.offset), max(hi, x.tail_start)
        center = [x[i] for i in range(a, b)]
        center[lo - a : hi - a] = values
        return cls(
            tuple(x[i] for i in range(a - len(x.left), a)),
            tuple(center),
            a,
            tuple(x[i] for i in range(b, b + len(x.right))),
        )

    @property
    def tail_start(self) -> int:
        return self.offset + len(self.center)

    @property
    def is_periodic(self) -> bool:
        return not self.center and self.left == self.right and self.offset == 0

    @property
    def period(self) -> int:
        if not self.is_periodic:
            raise SFTError("point is not periodic")
        return len(self.right)

    @property
    def span(self) -> int:
        """Largest |i| touched by the center or a tail seam."""
        return max(abs(self.offset), abs(self.tail_start)) + 1

    def __getitem__(self, i: int):
        return _raw_coord(self.left, self.center, self.offset, self.right, i)

    def window(self, lo: int, hi: int) -> tuple:
        """Coordinates ``lo .. hi`` inclusive."""
        u, w, l, v = self.left, self.center, self.offset, self.right
        t = l + len(w)
        if lo >= t:
            q = len(v)
            return tuple(v[(i - t) % q] for i in range(lo, hi + 1))
        if hi < l:
            p = len(u)
            return tuple(u[(i - l) % p] for i in range(lo, hi + 1))
        return tuple(_raw_coord(u, w, l, v, i) for i in range(lo, hi + 1))

    def sort_key(self):
        return (len(self.right), len(self.left), len(self.center), self.right, self.left, self.center, self.offset)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_point(self)


@dataclass(frozen=True)
class SmaleConstants:
    lambda0: Fraction = Fraction(1, 2)

    def __post_init__(self):
        lam = Fraction(self.lambda0)
        if not 0 < lam < 1:
            raise SFTError(f"lambda0 must lie in (0, 1), got {lam}")
        object.__setattr__(self, "lambda0", lam)


DEFAULT_CONSTANTS = SmaleConstants()


def coord(x: Point, i: int):
    return x[i]


def shift(x: Point, n: int = 1) -> Point:
    """``y_i = x_{i+n}``."""
    if n == 0:
        return x
    if x.is_periodic:
        q = len(x.right)
        k = n % q
        return Point._trusted(x.right[k:] + x.right[:k], (), 0, x.right[k:] + x.right[:k])
    # canonical form is translation invariant
    return Point._trusted(x.left, x.center, x.offset - n, x.right)


def _scan_bound(x: Point, z: Point) -> int:
    right = max(abs(x.tail_start), abs(z.tail_start)) + len(x.right) + len(z.right)
    left = max(abs(x.offset), abs(z.offset)) + len(x.left) + len(z.left)
    return max(right, left) + 1


def first_difference(x: Point, z: Point):
    """Least |i| with ``x_i != z_i``, or None when ``x == z``."""
    if x == z:
        return None
    for k in range(_scan_bound(x, z) + 1):
        if x[k] != z[k] or x[-k] != z[-k]:
            return k
    raise AssertionError("distinct points agreed on the whole scan window")


def metric(x: Point, z: Point, c: SmaleConstants = DEFAULT_CONSTANTS) -> Fraction:
    k = first_difference(x, z)
    if k is None:
        return Fraction(0)
    return c.lambda0**k


def bracket(x: Point, z: Point) -> Point:
    """Past of ``x`` spliced to the future of ``z`` at index 0."""
    if x[0] != z[0]:
        raise BracketUndefined(f"x_0={x[0]} differs from z_0={z[0]}")
    a = min(x.offset, 0)
    b = max(z.tail_start, 1)
    center = tuple(x[i] for i in range(a, 0)) + tuple(z[i] for i in range(0, b))
    left = tuple(x[i] for i in range(a - len(x.left), a))
    right = tuple(z[i] for i in range(b, b + len(z.right)))
    return Point(left, center, a, right)


def reverse(x: Point) -> Point:
    """``y_i = x_{-i}``; maps points over A to points over A transpose."""
    return Point(x.right[::-1], x.center[::-1], 1 - x.tail_start, x.left[::-1])


# ---------------------------------------------------------------------------
# point literals

_POINT_RE = re.compile(
    r"^\s*left=\(([^)]*)\)\s+center=\(([^)]*)\)@(-?\d+)\s+right=\(([^)]*)\)\s*$"
)


def _symbols(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise ParseError(f"bad symbol list {text!r}") from None


def parse_point(text: str) -> Point:
    """Parse ``left=(u) center=(w)@l right=(v)``."""
    m = _POINT_RE.match(text)
    if not m:
        raise ParseError(f"bad point literal {text!r}")
    u, w, l, v = _symbols(m[1]), _symbols(m[2]), int(m[3]), _symbols(m[4])
    if not u or not v:
        raise ParseError(f"tails must be nonempty in {text!r}")
    return Point(u, w, l, v)


def format_point(x: Point) -> str:
    def s(word):
        return ",".join(str(a) for a in word)

    return f"left=({s(x.left)}) center=({s(x.center)})@{x.offset} right=({s(x.right)})"
