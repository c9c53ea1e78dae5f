"""Command-line front end: one subcommand per analysis, deterministic output.

Exit codes: 0 success, 2 input error, 3 budget/precision error (a partial
report is still printed when one exists). JSON output is byte-identical
across identical invocations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import fibercurve, lattes, numeric, orbits, ratfunc
from .decomp import bounded_genus_criterion, left_factor, verify_semiconjugacy
from .errors import (
    BadOrbifoldError,
    BudgetError,
    CapacityError,
    FieldMismatchError,
    InvalidTransformError,
    ParseError,
    PrecisionError,
    PreconditionError,
    RatorbError,
)
from .orbifold import canonical_orbifolds
from .parse import format_ratfunc, parse, parse_point

INPUT_ERRORS = (ParseError, ValueError, FieldMismatchError, InvalidTransformError,
                BadOrbifoldError, PreconditionError, ZeroDivisionError)
RESOURCE_ERRORS = (BudgetError, CapacityError, PrecisionError)


def _emit(payload: dict, as_json: bool, human_lines: list[str]) -> None:
    if as_json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
        sys.stdout.write("\n")
    else:
        color = os.environ.get("RATORB_COLOR", "") not in ("", "0", "no")
        for line in human_lines:
            if color and line.endswith(":"):
                line = f"\x1b[1m{line}\x1b[0m"
            sys.stdout.write(line + "\n")


def _cmd_analyze(args) -> tuple[int, dict, list[str]]:
    f = parse(args.expr)
    lines = [f"map: {format_ratfunc(f)}", f"degree: {f.degree}"]
    payload = {"command": "analyze", "map": format_ratfunc(f), "degree": f.degree}
    if f.degree >= 2:
        crit = numeric.critical_data(f, args.precision_bits)
        payload["critical_data"] = [
            {"point": str(d.point), "local_degree": d.local_degree,
             "value": str(d.value)} for d in crit]
        lines.append("critical data:")
        for d in crit:
            lines.append(f"  point {d.point}  local degree {d.local_degree}  value {d.value}")
        o1, o2 = canonical_orbifolds(f, crit, args.precision_bits)
        payload["O1"] = o1.to_json()
        payload["O2"] = o2.to_json()
        payload["chi_O1"] = str(o1.euler_char())
        payload["chi_O2"] = str(o2.euler_char())
        lines.append(f"O1: {o1!r}  chi = {o1.euler_char()}")
        lines.append(f"O2: {o2!r}  chi = {o2.euler_char()}")
    return 0, payload, lines


def _cmd_lattes(args) -> tuple[int, dict, list[str]]:
    f = parse(args.expr)
    rep = lattes.detect_generalized_lattes(f, search_bound=args.search_bound)
    payload = {"command": "lattes", "map": format_ratfunc(f), **rep.to_json()}
    lines = [f"map: {format_ratfunc(f)}", f"class: {rep.klass.kind}"]
    if rep.maximal is not None:
        lines.append(f"maximal orbifold: {rep.maximal!r}")
    lines.append(f"admissible orbifolds: {len(rep.orbifolds)}")
    for o in rep.orbifolds:
        lines.append(f"  {o!r}")
    if rep.warning:
        lines.append(f"warning: {rep.warning}")
    return 0, payload, lines


def _cmd_curve_genus(args) -> tuple[int, dict, list[str]]:
    a = parse(args.a)
    u = parse(args.u)
    rows = fibercurve.genus_sequence(a, u, args.dmax)
    payload = {"command": "curve-genus", "A": format_ratfunc(a),
               "U": format_ratfunc(u), "rows": rows}
    lines = [f"A: {format_ratfunc(a)}", f"U: {format_ratfunc(u)}"]
    for r in rows:
        comps = ", ".join(
            f"(deg_p={c['deg_p']}, deg_q={c['deg_q']}, genus={c['genus']})"
            for c in r["components"])
        lines.append(f"d={r['d']}: n={r['n']} min_genus={r['min_genus']}  {comps}")
    return 0, payload, lines


def _cmd_left_factor(args) -> tuple[int, dict, list[str]]:
    u = parse(args.u)
    f = parse(args.f)
    w = left_factor(u, f)
    payload = {"command": "left-factor", "U": format_ratfunc(u),
               "F": format_ratfunc(f), **w.to_json()}
    lines = [f"U: {format_ratfunc(u)}", f"F: {format_ratfunc(f)}"]
    if w.found:
        lines.append(f"V: {format_ratfunc(w.V)}")
    else:
        lines.append(f"no factor: {w.reason}")
    return 0, payload, lines


def _cmd_semiconj(args) -> tuple[int, dict, list[str]]:
    a = parse(args.a)
    x = parse(args.x)
    b = parse(args.b)
    ok = verify_semiconjugacy(a, x, b)
    payload = {"command": "semiconj", "A": format_ratfunc(a), "X": format_ratfunc(x),
               "B": format_ratfunc(b), "holds": ok}
    return 0, payload, [f"A o X = X o B: {ok}"]


def _cmd_bounded_genus(args) -> tuple[int, dict, list[str]]:
    a = parse(args.a)
    u = parse(args.u)
    verdict = bounded_genus_criterion(a, u, l_max=args.lmax)
    payload = {"command": "bounded-genus", "A": format_ratfunc(a),
               "U": format_ratfunc(u), **verdict.to_json()}
    lines = [f"status: {verdict.status} (route {verdict.route})"]
    if verdict.witness is not None:
        lines.append(f"l = {verdict.l}, V = {format_ratfunc(verdict.witness)}")
    if verdict.theta is not None:
        lines.append(f"theta = {format_ratfunc(verdict.theta)}")
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    return 0, payload, lines


def _cmd_orbit_scan(args) -> tuple[int, dict, list[str]]:
    a = parse(args.a)
    u = parse(args.u)
    x0 = parse_point(args.x0)
    rep = orbits.orbit_scan(a, u, x0, args.n, height_cap_bits=args.height_cap)
    payload = {"command": "orbit-scan", **rep.to_json()}
    lines = [f"A: {format_ratfunc(a)}", f"U: {format_ratfunc(u)}", f"x0: {x0}",
             f"members (n <= {rep.horizon}): {rep.members()}"]
    fit = rep.fit
    if fit.status == "exact-on-window":
        parts = [f"{{{s}}}" for s in fit.singletons]
        parts += [f"{a} mod {fit.period}" for a in fit.classes]
        lines.append(f"fit: {', '.join(parts) if parts else 'empty'}"
                     f" (preperiod {fit.preperiod}, period {fit.period})")
    else:
        lines.append("fit: inconclusive")
    code = 0 if rep.status == "complete" else 3
    if code:
        lines.append(f"status: {rep.status} (horizon {rep.horizon})")
    return code, payload, lines


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ratorb",
        description="Orbifold calculus for rational maps: Lattes detection, "
                    "curve genus tables, left factors, exact orbit scans.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--precision-bits", type=int, default=128)
        p.add_argument("--degree-cap", type=int, default=ratfunc.DEFAULT_DEGREE_CAP)

    p = sub.add_parser("analyze", help="degrees, critical data, canonical orbifolds")
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("lattes", help="special / generalized Lattes classification")
    p.add_argument("expr")
    p.add_argument("--search-bound", type=int, default=lattes.DEFAULT_SEARCH_BOUND)
    common(p)
    p.set_defaults(fn=_cmd_lattes)

    p = sub.add_parser("curve-genus", help="components and genera of A^d(x) = U(y)")
    p.add_argument("a")
    p.add_argument("u")
    p.add_argument("--dmax", type=int, default=3)
    common(p)
    p.set_defaults(fn=_cmd_curve_genus)

    p = sub.add_parser("left-factor", help="decide F = U o V and reconstruct V")
    p.add_argument("u")
    p.add_argument("f")
    common(p)
    p.set_defaults(fn=_cmd_left_factor)

    p = sub.add_parser("semiconj", help="verify A o X = X o B exactly")
    p.add_argument("a")
    p.add_argument("x")
    p.add_argument("b")
    common(p)
    p.set_defaults(fn=_cmd_semiconj)

    p = sub.add_parser("bounded-genus", help="left-factor criterion for bounded genus")
    p.add_argument("a")
    p.add_argument("u")
    p.add_argument("--lmax", type=int, default=3)
    common(p)
    p.set_defaults(fn=_cmd_bounded_genus)

    p = sub.add_parser("orbit-scan", help="membership of A^n(x0) in U(P^1(Q))")
    p.add_argument("a")
    p.add_argument("u")
    p.add_argument("x0")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--height-cap", type=int, default=orbits.DEFAULT_HEIGHT_CAP_BITS)
    common(p)
    p.set_defaults(fn=_cmd_orbit_scan)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        code, payload, lines = args.fn(args)
    except INPUT_ERRORS as exc:
        _emit({"command": args.command, "error": str(exc), "kind": "input"},
              args.json, [f"error: {exc}"])
        return 2
    except RESOURCE_ERRORS as exc:
        _emit({"command": args.command, "error": str(exc), "kind": "resource"},
              args.json, [f"error: {exc}"])
        return 3
    _emit(payload, args.json, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
