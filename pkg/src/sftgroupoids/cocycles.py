"""Locally constant integer functions and the cocycles built from them.

A potential cocycle built from a windowed function ``g`` is

* ``forward``: ``d(x, z) = sum_{i >= 0} g(sigma^i x) - g(sigma^i z)``, or
* ``full``:    ``d(x, z) = sum_{i in Z} g(sigma^i x) - g(sigma^i z)``.

Both are finite sums on asymptotic pairs and satisfy
``d(x, z) + d(z, w) = d(x, w)``.  The forward form telescopes under the
shift (``d(x, z) - d(sigma x, sigma z) = g(x) - g(z)``), which is what makes
``c = g + const`` satisfy the cohomological condition; the full form is
shift invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .relations import AsymptoticPair, asymptotic_level, stable_level
from .sft import Point, SFTError, TransitionMatrix, shift


class MissingWord(SFTError):
    pass


def _as_word(key) -> tuple:
    if isinstance(key, str):
        parts = key.replace(",", " ").split()
        return tuple(int(p) for p in parts)
    return tuple(key)


@dataclass(frozen=True)
class LocallyConstantFn:
    """Integer function of ``x_{-k} .. x_k`` given by a complete table."""

    matrix: TransitionMatrix
    radius: int
    table: Mapping[tuple, int] = field(hash=False, compare=False)

    def __post_init__(self):
        table = {_as_word(k): int(v) for k, v in dict(self.table).items()}
        need = 2 * self.radius + 1
        for w in self.matrix.words(need):
            if w not in table:
                raise MissingWord(f"no value for admissible word {','.join(map(str, w))}")
        object.__setattr__(self, "table", table)

    @classmethod
    def constant(cls, A: TransitionMatrix, value: int) -> "LocallyConstantFn":
        return cls(A, 0, {(a,): value for a in A.symbols})

    @classmethod
    def from_symbols(cls, A: TransitionMatrix, values: Mapping[int, int]) -> "LocallyConstantFn":
        return cls(A, 0, {(a,): values[a] for a in A.symbols})

    @classmethod
    def from_function(cls, A: TransitionMatrix, radius: int, fn: Callable[[tuple], int]):
        return cls(A, radius, {w: fn(w) for w in A.words(2 * radius + 1)})

    def at(self, x: Point, j: int = 0) -> int:
        """Value at ``sigma^j(x)``."""
        k = self.radius
        w = x.window(j - k, j + k)
        try:
            return self.table[w]
        except KeyError:
            raise MissingWord(f"no value for word {w}") from None

    def __call__(self, x: Point) -> int:
        return self.at(x, 0)

    @property
    def values(self) -> set[int]:
        return set(self.table.values())

    @property
    def is_constant(self) -> bool:
        return len(self.values) == 1

    @property
    def max_abs(self) -> int:
        return max(abs(v) for v in self.values)

    def shifted_sum(self, other: "LocallyConstantFn", scale: int = 1) -> "LocallyConstantFn":
        """``self + scale * other`` on the common window."""
        k = max(self.radius, other.radius)

        def fn(w):
            a = w[k - self.radius : k + self.radius + 1]
            b = w[k - other.radius : k + other.radius + 1]
            return self.table[a] + scale * other.table[b]

        return LocallyConstantFn.from_function(self.matrix, k, fn)


def eval_lc(f: LocallyConstantFn, x: Point) -> int:
    return f(x)


def power_sum(f: LocallyConstantFn, x: Point, n: int, step: int = 1) -> int:
    """``f^n(x)`` for the homeomorphism ``sigma^step``."""
    if n > 0:
        return sum(f.at(x, step * i) for i in range(n))
    if n < 0:
        return -sum(f.at(x, step * i) for i in range(n, 0))
    return 0


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.passed


def check_one_cocycle(
    f: Union[LocallyConstantFn, Callable[[int, Point], int]],
    points: Iterable[Point],
    bound: int,
    step: int = 1,
) -> CheckReport:
    """``f_n(x) + f_m(phi^n x) == f_{n+m}(x)`` for ``|n|, |m| <= bound``.

    ``f`` is either a windowed function (checked through ``power_sum``) or an
    arbitrary sequence ``(n, x) -> f_n(x)``.
    """
    if isinstance(f, LocallyConstantFn):
        fn = lambda n, x: power_sum(f, x, n, step)  # noqa: E731
    else:
        fn = f
    checked = 0
    for x in points:
        for n in range(-bound, bound + 1):
            xn = shift(x, step * n)
            for m in range(-bound, bound + 1):
                checked += 1
                lhs, rhs = fn(n, x) + fn(m, xn), fn(n + m, x)
                if lhs != rhs:
                    return CheckReport("one-cocycle", False, checked, {"x": str(x), "n": n, "m": m, "lhs": lhs, "rhs": rhs})
    return CheckReport("one-cocycle", True, checked)


@dataclass(frozen=True)
class PotentialCocycle:
    g: LocallyConstantFn
    span: str = "forward"

    def __post_init__(self):
        if self.span not in ("forward", "full"):
            raise SFTError(f"unknown potential span {self.span!r}")

    @classmethod
    def zero(cls, A: TransitionMatrix) -> "PotentialCocycle":
        return cls(LocallyConstantFn.constant(A, 0))

    @property
    def matrix(self) -> TransitionMatrix:
        return self.g.matrix

    @property
    def is_zero(self) -> bool:
        return self.g.is_constant

    @property
    def radius(self) -> int:
        return self.g.radius

    def terms(self, x: Point, z: Point, level: int = None) -> range:
        """Indices where ``g(sigma^i x) - g(sigma^i z)`` can be nonzero."""
        k = self.g.radius
        if self.span == "forward":
            s = stable_level(x, z) if level is None else level
            if s is None:
                raise SFTError("pair is not stably equivalent")
            return range(0, s + k)
        n = asymptotic_level(x, z) if level is None else level
        if n is None:
            raise SFTError("pair is not asymptotic")
        return range(-(n + k), n + k)

    def __call__(self, x: Point, z: Point) -> int:
        if x == z:
            return 0
        if self.is_zero:
            if asymptotic_level(x, z) is None:
                raise SFTError("pair is not asymptotic")
            return 0
        return sum(self.g.at(x, i) - self.g.at(z, i) for i in self.terms(x, z))


def eval_two_cocycle(d: PotentialCocycle, pair: AsymptoticPair) -> int:
    return d(pair.x, pair.z)


@dataclass(frozen=True)
class Condition1Report:
    """Verdicts of the five equivalent forms of the cohomological identity."""

    formulations: dict
    checked: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.formulations.values())

    @property
    def divergent(self) -> bool:
        return len({r.passed for r in self.formulations.values()}) > 1

    @property
    def counterexample(self):
        for r in self.formulations.values():
            if not r.passed:
                return r.counterexample
        return None

    def __bool__(self):
        return self.passed


def check_condition_1(
    c: LocallyConstantFn,
    d: PotentialCocycle,
    pairs: Sequence[AsymptoticPair],
    step: int = 1,
    m_bound: int = 5,
) -> Condition1Report:
    """``c(x) + d(phi x, phi z) == c(z) + d(x, z)`` on the supplied pairs,
    evaluated in all five equivalent formulations.

    (i)   ``varphi_h`` middle coordinate is multiplicative on composable pairs
    (ii)  the ``n``-translated ``m``-form
    (iii) the ``m``-form for ``|m| <= m_bound``
    (iv)  the ``m = 1`` form
    (v)   the ``m = -1`` form
    """

    def phi(x, n):
        return shift(x, step * n)

    def cm(m, x):
        return power_sum(c, x, m, step)

    def m_form(x, z, m):
        return cm(m, x) + d(phi(x, m), phi(z, m)), cm(m, z) + d(x, z)

    def middle(x, n, z):
        return cm(n, x) + d(phi(x, n), z)

    small = min(m_bound, 2)
    results = {}
    checked = 0

    def run(name, cases):
        nonlocal checked
        for info, (lhs, rhs) in cases:
            checked += 1
            if lhs != rhs:
                info = {k: str(v) if isinstance(v, Point) else v for k, v in info.items()}
                results[name] = CheckReport(name, False, checked, dict(info, lhs=lhs, rhs=rhs))
                return
        results[name] = CheckReport(name, True, checked)

    def form_iv():
        for p in pairs:
            yield {"x": p.x, "z": p.z}, m_form(p.x, p.z, 1)

    def form_v():
        for p in pairs:
            yield {"x": p.x, "z": p.z}, m_form(p.x, p.z, -1)

    def form_iii():
        for p in pairs:
            for m in range(-m_bound, m_bound + 1):
                yield {"x": p.x, "z": p.z, "m": m}, m_form(p.x, p.z, m)

    def form_ii():
        for p in pairs:
            for n in range(-small, small + 1):
                x = phi(p.x, -n)
                for m in range(-small, small + 1):
                    lhs = cm(m, phi(x, n)) + d(phi(x, m + n), phi(p.z, m))
                    rhs = cm(m, p.z) + d(phi(x, n), p.z)
                    yield {"x": x, "z": p.z, "n": n, "m": m}, (lhs, rhs)

    def form_i():
        # (x, n, x') (x', m, z) with x = phi^-n(p.x), x' = p.z, z = phi^m(p.x)
        for p in pairs:
            for n in range(-small, small + 1):
                x = phi(p.x, -n)
                for m in range(-small, small + 1):
                    z = phi(p.x, m)
                    lhs = middle(x, n + m, z)
                    rhs = middle(x, n, p.z) + middle(p.z, m, z)
                    yield {"x": x, "n": n, "x'": p.z, "m": m, "z": z}, (lhs, rhs)

    for name, gen in (("i", form_i), ("ii", form_ii), ("iii", form_iii), ("iv", form_iv), ("v", form_v)):
        run(name, gen())
    return Condition1Report(results, checked)


def constancy_on_family(c: LocallyConstantFn, points: Iterable[Point]) -> int:
    """max - min of ``c`` over the points."""
    vals = [c(x) for x in points]
    return max(vals) - min(vals)


def parse_table(text: str, A: TransitionMatrix) -> LocallyConstantFn:
    """Table file: the window radius on the first line, then ``word -> integer``."""
    from .sft import ParseError

    lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1)]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty table file")
    try:
        radius = int(lines[0][1])
    except ValueError:
        raise ParseError(f"line {lines[0][0]}: expected the window radius") from None
    table = {}
    for k, ln in lines[1:]:
        if "->" not in ln:
            raise ParseError(f"line {k}: expected 'word -> integer', got {ln!r}")
        word, value = ln.split("->", 1)
        try:
            table[_as_word(word)] = int(value)
        except ValueError:
            raise ParseError(f"line {k}: bad entry {ln!r}") from None
    return LocallyConstantFn(A, radius, table)


def format_table(f: LocallyConstantFn) -> str:
    rows = [str(f.radius)]
    for w in sorted(f.table):
        rows.append(f"{','.join(map(str, w))} -> {f.table[w]}")
    return "\n".join(rows) + "\n"
