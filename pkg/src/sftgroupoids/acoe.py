"""Verification of asymptotic continuous orbit equivalence (ACOE) data
between shifts of finite type, together with the groupoid map it induces.

A system is a matrix together with the homeomorphism ``sigma^sign``, so
``System(A, -1)`` is ``(X_A, sigma_A^-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .asymptotics import eta_s, eta_u, least_asymptotic_period, periodic_points_upto
from .cocycles import LocallyConstantFn, PotentialCocycle, power_sum
from .family import Family, FamilyDescriptor, build_family
from .relations import (
    GroupoidElement,
    NotAsymptotic,
    asymptotic_level,
    asymptotic_pair,
    make_element,
)
from .sft import Point, SFTError, TransitionMatrix, bracket, shift, validate_matrix


class InadmissibleImage(SFTError):
    pass


class NotInvertible(SFTError):
    pass


class InvalidElement(SFTError):
    pass


class NotPeriodicPreserving(SFTError):
    pass


class ConditionViolated(SFTError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class System:
    matrix: TransitionMatrix
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SFTError("system sign must be +1 or -1")

    def step(self, x: Point, n: int = 1) -> Point:
        return shift(x, self.sign * n)


# ---------------------------------------------------------------------------
# point maps


class PointMap:
    """A homeomorphism with a finite description."""

    window = 0

    def __call__(self, x: Point) -> Point:
        raise NotImplementedError

    def inverse(self) -> "PointMap":
        raise NotInvertible(f"{self!r} has no registered inverse")

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(PointMap):
    def __call__(self, x):
        return x

    def inverse(self):
        return self

    def describe(self):
        return {"type": "identity"}


@dataclass(frozen=True)
class Reversal(PointMap):
    def __call__(self, x):
        from .sft import reverse

        return reverse(x)

    def inverse(self):
        return self

    def describe(self):
        return {"type": "reversal"}


@dataclass(frozen=True)
class ShiftPower(PointMap):
    k: int

    @property
    def window(self):
        return abs(self.k)

    def __call__(self, x):
        return shift(x, self.k)

    def inverse(self):
        return ShiftPower(-self.k)

    def describe(self):
        return {"type": "shift", "k": self.k}


@dataclass(frozen=True)
class SlidingBlockCode(PointMap):
    """``y_i = rule(x_{i-memory} .. x_{i+anticipation})``."""

    memory: int
    anticipation: int
    rule: dict = field(hash=False, compare=False)
    source: TransitionMatrix
    target: TransitionMatrix
    inverse_code: Optional["SlidingBlockCode"] = field(default=None, hash=False, compare=False, repr=False)

    def __post_init__(self):
        rule = {tuple(k): int(v) for k, v in dict(self.rule).items()}
        object.__setattr__(self, "rule", rule)
        n = self.memory + self.anticipation + 1
        for w in self.source.words(n):
            if w not in rule:
                raise SFTError(f"block rule misses word {w}")
            if not 1 <= rule[w] <= self.target.size:
                raise InadmissibleImage(f"rule sends {w} outside the target alphabet")
        for w in self.source.words(n + 1):
            a, b = rule[w[:-1]], rule[w[1:]]
            if not self.target.allowed(a, b):
                raise InadmissibleImage(f"word {w} maps to forbidden transition {a}->{b}")

    @property
    def window(self):
        return max(self.memory, self.anticipation)

    def __call__(self, x):
        m, a = self.memory, self.anticipation

        def y(i):
            return self.rule[tuple(x[j] for j in range(i - m, i + a + 1))]

        lo, hi = x.offset - a, x.tail_start + m
        p, q = len(x.left), len(x.right)
        return Point(
            tuple(y(i) for i in range(lo - p, lo)),
            tuple(y(i) for i in range(lo, hi)),
            lo,
            tuple(y(i) for i in range(hi, hi + q)),
        )

    def inverse(self):
        if self.inverse_code is None:
            raise NotInvertible("no inverse registered for this block code")
        return self.inverse_code

    def describe(self):
        return {
            "type": "block",
            "memory": self.memory,
            "anticipation": self.anticipation,
            "rule": {",".join(map(str, w)): s for w, s in sorted(self.rule.items())},
            "target": [list(r) for r in self.target.entries],
        }


@dataclass(frozen=True)
class Composition(PointMap):
    """``maps[0] o maps[1] o ... o maps[-1]``."""

    maps: tuple

    @property
    def window(self):
        return sum(m.window for m in self.maps)

    def __call__(self, x):
        for m in reversed(self.maps):
            x = m(x)
        return x

    def inverse(self):
        return Composition(tuple(m.inverse() for m in reversed(self.maps)))

    def describe(self):
        return {"type": "compose", "maps": [m.describe() for m in self.maps]}


def pair_inverses(code: SlidingBlockCode, inv: SlidingBlockCode) -> SlidingBlockCode:
    object.__setattr__(code, "inverse_code", inv)
    object.__setattr__(inv, "inverse_code", code)
    return code


def higher_block_code(A: TransitionMatrix, n: int = 2):
    """The ``n``-block presentation ``X_A -> X_{A^[n]}`` and its inverse."""
    words = list(A.words(n))
    index = {w: k + 1 for k, w in enumerate(words)}
    B = validate_matrix([[int(u[1:] == v[:-1]) for v in words] for u in words])
    code = SlidingBlockCode(0, n - 1, {w: index[w] for w in words}, A, B)
    inv = SlidingBlockCode(0, 0, {(index[w],): w[0] for w in words}, B, A)
    return pair_inverses(code, inv), B


def apply_map(h: PointMap, x: Point) -> Point:
    return h(x)


def is_conjugacy(h: PointMap, direction: int, points: Iterable[Point], phi: int = 1, psi: int = 1) -> bool:
    """``h o phi == psi^direction o h`` on every point."""
    return all(h(shift(x, phi)) == shift(h(x), psi * direction) for x in points)


def check_periodic_preserving(h: PointMap, A: TransitionMatrix, P: int) -> bool:
    return all(h(x).is_periodic for x in periodic_points_upto(A, P))


# ---------------------------------------------------------------------------
# bundles and verification


@dataclass(frozen=True)
class AcoeBundle:
    source: System
    target: System
    h: PointMap
    h_inv: PointMap
    c1: LocallyConstantFn
    c2: LocallyConstantFn
    d1: PotentialCocycle
    d2: PotentialCocycle
    name: str = ""

    @classmethod
    def flip_type(cls, source: System, target: System, h: PointMap, eps: int, name: str = "", h_inv=None):
        """``(h, c1 = c2 = eps, d1 = d2 = 0)``."""
        A, B = source.matrix, target.matrix
        return cls(
            source,
            target,
            h,
            h.inverse() if h_inv is None else h_inv,
            LocallyConstantFn.constant(A, eps),
            LocallyConstantFn.constant(B, eps),
            PotentialCocycle.zero(A),
            PotentialCocycle.zero(B),
            name,
        )


CONDITIONS = ("1", "2", "i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


@dataclass
class ConditionResult:
    name: str
    passed: bool = True
    checked: int = 0
    failures: int = 0
    max_level: Optional[int] = None
    counterexample: Optional[dict] = None

    def record(self, ok: bool, witness: dict):
        self.checked += 1
        if not ok:
            self.failures += 1
            self.passed = False
            if self.counterexample is None:
                self.counterexample = witness

    def level(self, n: int):
        self.max_level = n if self.max_level is None else max(self.max_level, n)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "max_level": self.max_level,
            "counterexample": self.counterexample,
        }


@dataclass
class VerificationReport:
    bundle: str
    conditions: dict
    preliminaries: dict
    K1: Optional[int]
    K2: Optional[int]
    level_propagation: dict
    descriptor: FamilyDescriptor
    r_star: int
    marker: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions.values()) and all(c.passed for c in self.preliminaries.values())

    @property
    def failing(self) -> list[str]:
        return [k for k in CONDITIONS if not self.conditions[k].passed]

    def as_dict(self) -> dict:
        return {
            "bundle": self.bundle,
            "passed": self.passed,
            "marker": self.marker,
            "family": self.descriptor.as_dict(),
            "R_star": self.r_star,
            "K1": self.K1,
            "K2": self.K2,
            "preliminaries": {k: v.as_dict() for k, v in self.preliminaries.items()},
            "conditions": {k: self.conditions[k].as_dict() for k in CONDITIONS},
            "level_propagation": self.level_propagation,
        }


def _s(x: Point) -> str:
    return str(x)


def _level_or_none(a: Point, b: Point):
    return asymptotic_level(a, b)


def _check_membership(res: ConditionResult, a: Point, b: Point, witness: dict):
    n = _level_or_none(a, b)
    res.record(n is not None, dict(witness, pair=[_s(a), _s(b)]))
    if n is not None:
        res.level(n)


def _check_value(res: ConditionResult, fn, expected: int, witness: dict):
    try:
        value = fn()
    except SFTError as exc:
        res.record(False, dict(witness, error=str(exc)))
        return
    res.record(value == expected, dict(witness, value=value, expected=expected))


def _side(h, h_inv, X: System, Y: System, c1, c2, d1, d2, fam_x: Family, prefix):
    """Conditions (i)/(iii)/(v)/(vii) for one direction; the mirror direction
    is obtained by swapping the roles of the data."""
    phi, psi = X.step, Y.step
    xi, eta, val, zero = (ConditionResult(p) for p in prefix)
    pt, cn, dn = ("x", "c1(x)", "d1") if prefix[0] == "i" else ("y", "c2(y)", "d2")
    for x in fam_x.points:
        hx = h(x)
        c = c1(x)
        a, b = psi(hx, c), h(phi(x))
        _check_membership(xi, a, b, {pt: _s(x)})
        _check_value(
            val,
            lambda: power_sum(c2, hx, c, Y.sign) + d2(a, b),
            1,
            {pt: _s(x), cn: c},
        )
    for pr in fam_x.pairs:
        hx, hz = h(pr.x), h(pr.z)
        try:
            k = d1(pr.x, pr.z)
        except SFTError as exc:
            eta.record(False, {"x": _s(pr.x), "z": _s(pr.z), "error": str(exc)})
            zero.record(False, {"x": _s(pr.x), "z": _s(pr.z), "error": str(exc)})
            continue
        a = psi(hx, k)
        _check_membership(eta, a, hz, {"x": _s(pr.x), "z": _s(pr.z), dn: k})
        _check_value(
            zero,
            lambda: power_sum(c2, hx, k, Y.sign) + d2(a, hz),
            0,
            {"x": _s(pr.x), "z": _s(pr.z), dn: k},
        )
    return xi, eta, val, zero


def _cohomological(c, d, S: System, fam: Family, name) -> ConditionResult:
    res = ConditionResult(name)
    for pr in fam.pairs:
        _check_value(
            res,
            lambda: c(pr.x) + d(S.step(pr.x), S.step(pr.z)) - d(pr.x, pr.z),
            c(pr.z),
            {"x": _s(pr.x), "z": _s(pr.z)},
        )
    return res


def xi_levels(bundle: AcoeBundle, points: Sequence[Point], n_max: int = 6) -> dict:
    """Witness levels of ``xi_1^n(x) = (psi^{c_1^n(x)} h(x), h(phi^n x))``.

    ``K_n`` is the maximum over ``points``; ``K_1`` is taken over the points
    ``phi^j(x)``, ``0 <= j < n_max``, where the recursive bound invokes it.
    """
    X, Y, h, c1 = bundle.source, bundle.target, bundle.h, bundle.c1
    K = {}
    for n in range(1, n_max + 1):
        worst = 0
        for x in points:
            a = Y.step(h(x), power_sum(c1, x, n, X.sign))
            lvl = asymptotic_level(a, h(X.step(x, n)))
            if lvl is None:
                return {"K": K, "defined": False}
            worst = max(worst, lvl)
        K[n] = worst
    base = 0
    for x in points:
        for j in range(n_max):
            y = X.step(x, j)
            lvl = asymptotic_level(Y.step(h(y), bundle.c1(y)), h(X.step(y)))
            base = max(base, lvl)
    C1 = c1.max_abs
    checks = {n: K[n + 1] <= K[n] + C1 + base for n in range(1, n_max)}
    return {"K": K, "K1_closure": base, "C1": C1, "bound_holds": checks, "defined": True}


def verify_acoe(
    bundle: AcoeBundle,
    descriptor: FamilyDescriptor = FamilyDescriptor(),
    fam_x: Family = None,
    fam_y: Family = None,
) -> VerificationReport:
    X, Y = bundle.source, bundle.target
    fam_x = fam_x or build_family(X.matrix, descriptor)
    fam_y = fam_y or build_family(Y.matrix, descriptor)
    b = bundle

    prelim = {"homeomorphism": ConditionResult("homeomorphism"), "admissible": ConditionResult("admissible")}
    for x in fam_x.points:
        hx = b.h(x)
        prelim["admissible"].record(Y.matrix.admits(hx), {"x": _s(x), "h(x)": _s(hx)})
        prelim["homeomorphism"].record(b.h_inv(hx) == x, {"x": _s(x)})
    for y in fam_y.points:
        gy = b.h_inv(y)
        prelim["admissible"].record(X.matrix.admits(gy), {"y": _s(y), "h_inv(y)": _s(gy)})
        prelim["homeomorphism"].record(b.h(gy) == y, {"y": _s(y)})

    conds = {
        "1": _cohomological(b.c1, b.d1, X, fam_x, "1"),
        "2": _cohomological(b.c2, b.d2, Y, fam_y, "2"),
    }
    xi1, eta1, v, vii = _side(b.h, b.h_inv, X, Y, b.c1, b.c2, b.d1, b.d2, fam_x, ("i", "iii", "v", "vii"))
    xi2, eta2, vi, viii = _side(b.h_inv, b.h, Y, X, b.c2, b.c1, b.d2, b.d1, fam_y, ("ii", "iv", "vi", "viii"))
    conds.update({"i": xi1, "ii": xi2, "iii": eta1, "iv": eta2, "v": v, "vi": vi, "vii": vii, "viii": viii})

    K1, K2 = xi1.max_level, xi2.max_level
    if xi1.passed:
        prop = xi_levels(b, fam_x.points)
    else:
        prop = {"defined": False}
    windows = b.h.window + b.h_inv.window + b.c1.radius + b.c2.radius + b.d1.radius + b.d2.radius
    r_star = windows + max(K1 or 0, K2 or 0)
    marker = "ExactlyVerified" if descriptor.radius >= r_star else "VerifiedOnFamily"
    return VerificationReport(b.name, conds, prelim, K1, K2, prop, descriptor, r_star, marker)


# ---------------------------------------------------------------------------
# the induced groupoid map


class GroupoidMorphism:
    """``(x, n, z) -> (h(x), c_1^n(x) + d_1(phi^n x, z), h(z))``."""

    def __init__(self, h, c, d, source: System, target: System):
        self.h, self.c, self.d = h, c, d
        self.source, self.target = source, target

    def cocycle(self, x: Point, n: int, z: Point) -> int:
        return power_sum(self.c, x, n, self.source.sign) + self.d(self.source.step(x, n), z)

    def __call__(self, g) -> GroupoidElement:
        if isinstance(g, GroupoidElement):
            if g.sign != self.source.sign:
                raise InvalidElement("element belongs to a different system")
            x, n, z = g.x, g.n, g.z
        else:
            x, n, z = g
            try:
                make_element(x, n, z, self.source.sign)
            except NotAsymptotic as exc:
                raise InvalidElement(str(exc)) from None
        try:
            return make_element(self.h(x), self.cocycle(x, n, z), self.h(z), self.target.sign)
        except NotAsymptotic as exc:
            raise ConditionViolated(f"image of ({x}, {n}, {z}) is not a groupoid element") from exc


def build_varphi(bundle: AcoeBundle) -> GroupoidMorphism:
    return GroupoidMorphism(bundle.h, bundle.c1, bundle.d1, bundle.source, bundle.target)


def build_varphi_inverse(bundle: AcoeBundle) -> GroupoidMorphism:
    return GroupoidMorphism(bundle.h_inv, bundle.c2, bundle.d2, bundle.target, bundle.source)


# ---------------------------------------------------------------------------
# flip classification


@dataclass(frozen=True)
class FlipClassification:
    kind: str  # "conjugacy", "flip" or "orbit"
    sign: Optional[int]
    checked_periodic: int
    checked_points: int

    def as_dict(self) -> dict:
        return {"kind": self.kind, "sign": self.sign, "checked_periodic": self.checked_periodic, "checked_points": self.checked_points}


def flip_from_ppacoe(bundle: AcoeBundle, P: int, fam_x: Family = None) -> FlipClassification:
    """Classify a periodic point preserving bundle.

    Checks ``h(phi x) == psi^{c_1(x)} h(x)`` on periodic points, the
    transport of limit points and of asymptotic periods, and when ``d_1`` is
    zero recovers ``c_1`` as a constant ``+-1``.
    """
    X, Y, h, c1, d1 = bundle.source, bundle.target, bundle.h, bundle.c1, bundle.d1
    periodic = periodic_points_upto(X.matrix, P)
    for x in periodic:
        if not h(x).is_periodic:
            raise NotPeriodicPreserving(f"h({x}) = {h(x)} is not periodic")
    for x in periodic:
        lhs, rhs = h(X.step(x)), Y.step(h(x), c1(x))
        if lhs != rhs:
            raise ConditionViolated("h(phi x) != psi^{c1(x)} h(x)", {"x": str(x), "lhs": str(lhs), "rhs": str(rhs)})

    points = fam_x.points if fam_x is not None else periodic
    for x in points:
        hx, hpx, c = h(x), h(X.step(x)), c1(x)
        for limit in (eta_s, eta_u):
            if limit(hpx) != Y.step(limit(hx), c):
                raise ConditionViolated(f"{limit.__name__} transport fails", {"x": str(x)})
        p = least_asymptotic_period(x)
        ch = power_sum(c1, x, p, X.sign) + d1(X.step(x, p), x)
        if asymptotic_level(Y.step(hx, ch), hx) is None:
            raise ConditionViolated("asymptotic period transport fails", {"x": str(x), "p": p, "c_h^p": ch})

    if not d1.is_zero:
        return FlipClassification("orbit", None, len(periodic), len(points))
    values = {c1(x) for x in points}
    if len(values) != 1:
        raise ConditionViolated("d1 = 0 but c1 is not constant", {"values": sorted(values)})
    (k,) = values
    if k not in (1, -1):
        raise ConditionViolated(f"c1 is the constant {k}, not +-1", {"value": k})
    return FlipClassification("conjugacy" if k == 1 else "flip", k, len(periodic), len(points))


# ---------------------------------------------------------------------------
# asymptotic flip conjugacy and bracket transport


@dataclass
class AsymptoticFlipReport:
    eps: int
    conditions: dict
    level_map: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def as_dict(self) -> dict:
        return {
            "eps": self.eps,
            "passed": self.passed,
            "conditions": {k: v.as_dict() for k, v in self.conditions.items()},
            "level_map": {str(k): v for k, v in sorted(self.level_map.items())},
        }


def asymptotic_flip_check(
    h: PointMap, eps: int, X: System, Y: System, fam_x: Family, fam_y: Family, h_inv: PointMap = None
) -> AsymptoticFlipReport:
    h_inv = h.inverse() if h_inv is None else h_inv
    conds = {k: ConditionResult(k) for k in ("1", "2", "3", "4")}
    for x in fam_x.points:
        _check_membership(conds["1"], Y.step(h(x), eps), h(X.step(x)), {"x": _s(x)})
    for y in fam_y.points:
        _check_membership(conds["2"], X.step(h_inv(y), eps), h_inv(Y.step(y)), {"y": _s(y)})
    level_map: dict = {}
    for pr in fam_x.pairs:
        a, b = h(pr.x), h(pr.z)
        _check_membership(conds["3"], a, b, {"x": _s(pr.x), "z": _s(pr.z)})
        n = asymptotic_level(a, b)
        if n is not None:
            level_map[pr.level] = max(level_map.get(pr.level, 0), n)
    for pr in fam_y.pairs:
        _check_membership(conds["4"], h_inv(pr.x), h_inv(pr.z), {"y": _s(pr.x), "w": _s(pr.z)})
    return AsymptoticFlipReport(eps, conds, level_map)


@dataclass(frozen=True)
class BracketReport:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None


def close_pairs(points: Sequence[Point], w: int, limit: int = 1500):
    """Pairs of points agreeing on ``[-w, w]``, deterministic order."""
    groups: dict = {}
    for x in points:
        groups.setdefault(x.window(-w, w), []).append(x)
    out = []
    for key in sorted(groups):
        g = groups[key]
        for x in g:
            for z in g:
                out.append((x, z))
    step = max(1, len(out) // limit)
    return out[::step][:limit]


def bracket_transport_check(h: PointMap, direction: int, points: Sequence[Point], limit: int = 1500) -> BracketReport:
    """``h([x, z]) == [h x, h z]`` (direction +1) or ``[h z, h x]`` (-1)."""
    checked = 0
    for x, z in close_pairs(points, h.window, limit):
        lhs = h(bracket(x, z))
        hx, hz = h(x), h(z)
        rhs = bracket(hx, hz) if direction == 1 else bracket(hz, hx)
        checked += 1
        if lhs != rhs:
            return BracketReport(False, checked, {"x": str(x), "z": str(z), "lhs": str(lhs), "rhs": str(rhs)})
    return BracketReport(True, checked)


def asymptotic_pair_image(h: PointMap, x: Point, z: Point):
    return asymptotic_pair(h(x), h(z))
