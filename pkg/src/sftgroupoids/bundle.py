"""Bundle files.

A bundle is a JSON document::

    {
      "name": "inverse",
      "source": {"matrix": "golden.txt", "sign": 1},
      "target": {"matrix": [[1, 1], [1, 0]], "sign": -1},
      "h": [{"type": "identity"}],
      "h_inv": "auto",
      "c1": -1,
      "c2": -1,
      "d1": 0,
      "d2": 0,
      "family": {"R": 6, "Q": 4, "P": 6}
    }

Matrices are inline rows or paths to matrix text files.  ``h`` is a chain of
maps applied right to left; each entry is one of ``identity``, ``reversal``,
``shift`` (with ``k``), ``higher_block`` (with ``n``) or ``block`` (with
``memory``, ``anticipation``, ``rule`` and optionally ``target`` and an
``inverse`` block of the same shape).  ``h_inv`` is ``"auto"`` or another
chain.  A function ``c`` is an integer constant, an inline table
``{"radius": k, "table": {"1,2,1": 3, ...}}`` or ``{"file": path}``.  A
cocycle ``d`` is ``0`` or ``{"potential": <function>, "span": "forward"}``.
Relative paths resolve against the bundle's directory.
"""

from __future__ import annotations

import json
from pathlib import Path

from .acoe import (
    AcoeBundle,
    Composition,
    Identity,
    PointMap,
    Reversal,
    ShiftPower,
    SlidingBlockCode,
    System,
    higher_block_code,
    pair_inverses,
)
from .cocycles import LocallyConstantFn, PotentialCocycle, parse_table
from .family import FamilyDescriptor
from .sft import ParseError, TransitionMatrix, parse_matrix, validate_matrix


class BundleError(ParseError):
    pass


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise BundleError(f"{where}: missing key {key!r}")
    return obj[key]


def load_matrix(value, base: Path) -> TransitionMatrix:
    if isinstance(value, str):
        return parse_matrix((base / value).read_text())
    if isinstance(value, list):
        return validate_matrix(value)
    raise BundleError(f"matrix must be a path or a list of rows, got {type(value).__name__}")


def _block(entry: dict, src: TransitionMatrix, default_target: TransitionMatrix, base: Path, where: str):
    target = load_matrix(entry["target"], base) if "target" in entry else default_target
    rule = {tuple(int(s) for s in k.split(",")): v for k, v in _need(entry, "rule", where).items()}
    code = SlidingBlockCode(int(entry.get("memory", 0)), int(entry.get("anticipation", 0)), rule, src, target)
    if "inverse" in entry:
        inv = entry["inverse"]
        irule = {tuple(int(s) for s in k.split(",")): v for k, v in _need(inv, "rule", where).items()}
        back = SlidingBlockCode(int(inv.get("memory", 0)), int(inv.get("anticipation", 0)), irule, target, src)
        pair_inverses(code, back)
    return code, target


def load_chain(chain, source: TransitionMatrix, target: TransitionMatrix, base: Path, label: str):
    """Build a map from a chain; entries apply right to left starting at ``source``."""
    if not isinstance(chain, list) or not chain:
        raise BundleError(f"{label}: expected a nonempty list of maps")
    maps = []
    cur = source
    for k, entry in reversed(list(enumerate(chain))):
        where = f"{label}[{k}]"
        kind = _need(entry, "type", where)
        if kind == "identity":
            m = Identity()
        elif kind == "reversal":
            m, cur = Reversal(), cur.transpose()
        elif kind == "shift":
            m = ShiftPower(int(_need(entry, "k", where)))
        elif kind == "higher_block":
            m, cur = higher_block_code(cur, int(entry.get("n", 2)))
        elif kind == "block":
            m, cur = _block(entry, cur, target, base, where)
        else:
            raise BundleError(f"{where}: unknown map type {kind!r}")
        maps.append(m)
    if cur != target:
        raise BundleError(f"{label}: chain ends over a different matrix than the target")
    maps.reverse()
    return maps[0] if len(maps) == 1 else Composition(tuple(maps))


def load_function(value, A: TransitionMatrix, base: Path, label: str) -> LocallyConstantFn:
    if isinstance(value, bool):
        raise BundleError(f"{label}: expected an integer or a table")
    if isinstance(value, int):
        return LocallyConstantFn.constant(A, value)
    if isinstance(value, dict) and "file" in value:
        return parse_table((base / value["file"]).read_text(), A)
    if isinstance(value, dict) and "table" in value:
        return LocallyConstantFn(A, int(value.get("radius", 0)), value["table"])
    raise BundleError(f"{label}: expected an integer or a table")


def load_cocycle(value, A: TransitionMatrix, base: Path, label: str) -> PotentialCocycle:
    if value == 0:
        return PotentialCocycle.zero(A)
    if isinstance(value, dict) and "potential" in value:
        g = load_function(value["potential"], A, base, label)
        return PotentialCocycle(g, value.get("span", "forward"))
    raise BundleError(f"{label}: expected 0 or a potential")


def load_descriptor(value: dict, default: FamilyDescriptor) -> FamilyDescriptor:
    return FamilyDescriptor(
        radius=int(value.get("R", default.radius)),
        tails=int(value.get("Q", default.tails)),
        periods=int(value.get("P", default.periods)),
        samples=int(value.get("samples", default.samples)),
        seed=int(value.get("seed", default.seed)),
    )


def parse_bundle(doc: dict, base: Path = Path("."), default: FamilyDescriptor = FamilyDescriptor()):
    """Returns ``(bundle, descriptor)``."""
    if not isinstance(doc, dict):
        raise BundleError("bundle must be a JSON object")
    src, tgt = _need(doc, "source", "bundle"), _need(doc, "target", "bundle")
    A, B = load_matrix(_need(src, "matrix", "source"), base), load_matrix(_need(tgt, "matrix", "target"), base)
    X, Y = System(A, int(src.get("sign", 1))), System(B, int(tgt.get("sign", 1)))
    h: PointMap = load_chain(_need(doc, "h", "bundle"), A, B, base, "h")
    inv = doc.get("h_inv", "auto")
    h_inv = h.inverse() if inv == "auto" else load_chain(inv, B, A, base, "h_inv")
    bundle = AcoeBundle(
        X,
        Y,
        h,
        h_inv,
        load_function(_need(doc, "c1", "bundle"), A, base, "c1"),
        load_function(_need(doc, "c2", "bundle"), B, base, "c2"),
        load_cocycle(doc.get("d1", 0), A, base, "d1"),
        load_cocycle(doc.get("d2", 0), B, base, "d2"),
        str(doc.get("name", "")),
    )
    return bundle, load_descriptor(doc.get("family", {}), default)


def load_bundle(path, default: FamilyDescriptor = FamilyDescriptor()):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise BundleError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return parse_bundle(doc, path.parent, default)
