"""Command line front end.

    sftg [options] matrix-info MATRIX
    sftg [options] equiv MATRIX X Z
    sftg [options] limits MATRIX X
    sftg [options] verify BUNDLE

Exit status: 0 on success or a passing verification, 1 on a failed
verification, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .acoe import (
    ConditionViolated,
    NotPeriodicPreserving,
    check_periodic_preserving,
    flip_from_ppacoe,
    verify_acoe,
)
from .asymptotics import alpha_limit, limit_data, omega_limit, recurrence_conditions
from .bundle import load_bundle
from .family import FamilyDescriptor, build_family
from .relations import asymptotic_level, stable_level, unstable_level
from .sft import SFTError, SmaleConstants, format_point, metric, parse_matrix, parse_point

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class SessionConfig:
    lambda0: Fraction = Fraction(1, 2)
    radius: Optional[int] = None
    tails: Optional[int] = None
    periods: Optional[int] = None
    format: str = "text"

    def __post_init__(self):
        SmaleConstants(self.lambda0)
        for name in ("radius", "tails", "periods"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise SFTError(f"--{name} must be positive")
        if self.format not in ("text", "structured"):
            raise SFTError(f"unknown format {self.format!r}")

    def descriptor(self, base: FamilyDescriptor = FamilyDescriptor()) -> FamilyDescriptor:
        changes = {k: v for k, v in (("radius", self.radius), ("tails", self.tails), ("periods", self.periods)) if v is not None}
        return dataclasses.replace(base, **changes)


def emit(report: dict, cfg: SessionConfig, text_lines: list[str], out=None):
    out = out or sys.stdout
    if cfg.format == "structured":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _read_matrix(path):
    return parse_matrix(Path(path).read_text())


def cmd_matrix_info(path, cfg: SessionConfig, out=None) -> int:
    A = _read_matrix(path)
    P = cfg.descriptor().periods
    traces = [A.trace_power(p) for p in range(1, P + 1)]
    report = {
        "size": A.size,
        "irreducible": A.irreducible,
        "non_permutation": A.non_permutation,
        "traces": traces,
    }
    lines = [
        f"size {A.size}",
        "irreducible" if A.irreducible else "not irreducible",
        "non-permutation" if A.non_permutation else "permutation",
        "traces " + ",".join(map(str, traces)),
    ]
    emit(report, cfg, lines, out)
    return EXIT_OK


def cmd_equiv(matrix, x_text, z_text, cfg: SessionConfig, out=None) -> int:
    A = _read_matrix(matrix)
    x, z = A.check(parse_point(x_text)), A.check(parse_point(z_text))
    levels = {"stable": stable_level(x, z), "unstable": unstable_level(x, z), "asymptotic": asymptotic_level(x, z)}
    dist = metric(x, z, SmaleConstants(cfg.lambda0))
    report = {"x": format_point(x), "z": format_point(z), "levels": levels, "distance": str(dist)}
    lines = [f"{k}: {'not equivalent' if v is None else f'level {v}'}" for k, v in levels.items()]
    lines.append(f"distance: {dist}")
    emit(report, cfg, lines, out)
    return EXIT_OK


def cmd_limits(matrix, x_text, cfg: SessionConfig, out=None) -> int:
    A = _read_matrix(matrix)
    x = A.check(parse_point(x_text))
    ld = limit_data(x)
    conds = recurrence_conditions(x)
    recurrent = all(conds.values())
    report = {
        "eta_s": format_point(ld.eta_s),
        "eta_u": format_point(ld.eta_u),
        "p_s": ld.p_s,
        "p_u": ld.p_u,
        "least_asymptotic_period": ld.least_asymptotic_period,
        "omega": [format_point(y) for y in omega_limit(x)],
        "alpha": [format_point(y) for y in alpha_limit(x)],
        "recurrence": conds,
        "recurrent": recurrent,
    }
    lines = [
        f"eta_s: {report['eta_s']}",
        f"eta_u: {report['eta_u']}",
        f"p_s={ld.p_s} p_u={ld.p_u} lcm={ld.least_asymptotic_period}",
        "omega: " + "; ".join(report["omega"]),
        "alpha: " + "; ".join(report["alpha"]),
        "recurrent (periodic)" if recurrent else "not recurrent",
    ]
    emit(report, cfg, lines, out)
    return EXIT_OK


def verify_report(bundle_path, cfg: SessionConfig) -> dict:
    bundle, desc = load_bundle(bundle_path)
    desc = cfg.descriptor(desc)
    fam_x = build_family(bundle.source.matrix, desc)
    fam_y = build_family(bundle.target.matrix, desc)
    rep = verify_acoe(bundle, desc, fam_x, fam_y)
    report = rep.as_dict()
    classification = None
    if rep.passed:
        if check_periodic_preserving(bundle.h, bundle.source.matrix, desc.periods):
            try:
                classification = flip_from_ppacoe(bundle, desc.periods, fam_x).as_dict()
            except (ConditionViolated, NotPeriodicPreserving) as exc:
                classification = {"kind": "violation", "error": str(exc)}
        else:
            classification = {"kind": "not periodic point preserving"}
    report["classification"] = classification
    return report


def cmd_verify(bundle_path, cfg: SessionConfig, out=None) -> int:
    report = verify_report(bundle_path, cfg)
    lines = [f"bundle {report['bundle'] or bundle_path}: {'PASS' if report['passed'] else 'FAIL'} [{report['marker']}]"]
    fam = report["family"]
    lines.append(f"family R={fam['R']} Q={fam['Q']} P={fam['P']}, R*={report['R_star']}, K1={report['K1']}, K2={report['K2']}")
    for name, c in list(report["preliminaries"].items()) + [(f"({k})", v) for k, v in report["conditions"].items()]:
        status = "ok" if c["passed"] else "FAILED"
        lines.append(f"  {name:<14} {status:<6} checked {c['checked']}")
        if not c["passed"]:
            lines.append(f"    counterexample: {json.dumps(c['counterexample'], sort_keys=True)}")
    cls = report["classification"]
    if cls is not None:
        lines.append(f"classification: {cls['kind']}")
    emit(report, cfg, lines, out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sftg", description="Asymptotic groupoid computations on shifts of finite type.")
    p.add_argument("--lambda0", type=_fraction, default=Fraction(1, 2), help="metric base p/q in (0, 1)")
    p.add_argument("--radius", type=int, help="family disagreement radius R")
    p.add_argument("--tails", type=int, help="family tail period bound Q")
    p.add_argument("--periods", type=int, help="family periodic point bound P")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("matrix-info", help="matrix flags and traces of its powers")
    s.add_argument("matrix")
    s = sub.add_parser("equiv", help="equivalence levels of a pair of points")
    s.add_argument("matrix")
    s.add_argument("x")
    s.add_argument("z")
    s = sub.add_parser("limits", help="limit points and limit sets")
    s.add_argument("matrix")
    s.add_argument("x")
    s = sub.add_parser("verify", help="verify an ACOE bundle")
    s.add_argument("bundle")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = SessionConfig(args.lambda0, args.radius, args.tails, args.periods, args.format)
        if args.command == "matrix-info":
            return cmd_matrix_info(args.matrix, cfg)
        if args.command == "equiv":
            return cmd_equiv(args.matrix, args.x, args.z, cfg)
        if args.command == "limits":
            return cmd_limits(args.matrix, args.x, cfg)
        return cmd_verify(args.bundle, cfg)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
