"""Sphere orbifolds and the covering / minimal-holomorphic calculus.

An orbifold here is the Riemann sphere with finitely many marked points
carrying ramification values nu >= 2. Only good orbifolds are constructed
normally: not exactly one mark, and not exactly two marks with distinct
values. The three pointwise conditions relating a rational map f and a pair
of orbifolds are

    covering              nu2(f(z)) = nu1(z) * deg_z f
    minimal holomorphic   nu2(f(z)) = nu1(z) * gcd(deg_z f, nu2(f(z)))
    holomorphic           nu2(f(z)) | nu1(z) * deg_z f

checked on the finite support where any factor exceeds 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import BadOrbifoldError, PrecisionError
from .numeric import (
    CriticalDatum,
    aberth,
    critical_data,
    poly_to_numbers,
    root_points,
)
from .points import AlgebraicPoint, ComplexApprox, chordal, dedup_points
from .ratfunc import INF, ProjPoint, RatFunc, evaluate
from .scalar import Scalar


class MapKind(enum.IntEnum):
    """Lattice of map kinds between orbifolds (stronger = larger)."""

    NotHolomorphic = 0
    Holomorphic = 1
    MinimalHolomorphic = 2
    Covering = 3


class Orbifold:
    """Finitely many marked points with ramification values nu >= 2."""

    __slots__ = ("marks",)

    def __init__(self, marks, _check: bool = True):
        norm: list[tuple[AlgebraicPoint, int]] = []
        for pt, nu in marks:
            if not isinstance(pt, AlgebraicPoint):
                pt = AlgebraicPoint.from_exact(pt)
            nu = int(nu)
            if nu < 1:
                raise BadOrbifoldError("ramification value must be >= 1")
            if nu == 1:
                continue
            norm.append((pt, nu))
        for i, (p, _) in enumerate(norm):
            for q, _ in norm[i + 1:]:
                if p.same_point(q):
                    raise BadOrbifoldError("duplicate marked point")
        norm.sort(key=lambda m: m[0].sort_key())
        self.marks = tuple(norm)
        if _check and not self.is_good():
            raise BadOrbifoldError(
                f"bad orbifold: signature {self.signature()} (one mark, or two "
                "marks with distinct values)")

    @classmethod
    def unchecked(cls, marks) -> "Orbifold":
        return cls(marks, _check=False)

    @classmethod
    def trivial(cls) -> "Orbifold":
        return cls([])

    def is_good(self) -> bool:
        if len(self.marks) == 1:
            return False
        if len(self.marks) == 2 and self.marks[0][1] != self.marks[1][1]:
            return False
        return True

    def is_trivial(self) -> bool:
        return not self.marks

    def signature(self) -> tuple[int, ...]:
        return tuple(sorted(nu for _, nu in self.marks))

    def nu_at(self, pt: AlgebraicPoint) -> int:
        for q, nu in self.marks:
            if pt.same_point(q):
                return nu
        return 1

    def mark_index(self, pt: AlgebraicPoint) -> int | None:
        for i, (q, _) in enumerate(self.marks):
            if pt.same_point(q):
                return i
        return None

    def euler_char(self) -> Fraction:
        chi = Fraction(2)
        for _, nu in self.marks:
            chi += Fraction(1, nu) - 1
        return chi

    def same_orbifold(self, other: "Orbifold") -> bool:
        if len(self.marks) != len(other.marks):
            return False
        used = [False] * len(other.marks)
        for p, nu in self.marks:
            for j, (q, mu) in enumerate(other.marks):
                if not used[j] and nu == mu and p.same_point(q):
                    used[j] = True
                    break
            else:
                return False
        return True

    def __repr__(self):
        inner = ", ".join(f"nu({p}) = {nu}" for p, nu in self.marks)
        return f"Orbifold({inner})" if inner else "Orbifold(trivial)"

    # -- JSON wire form ------------------------------------------------------

    def to_json(self) -> dict:
        out = []
        for p, nu in self.marks:
            if p.is_infinity:
                s = "inf"
            elif p.exact is not None:
                s = str(p.exact.value)
            elif p.defining is not None:
                z = p.approx.to_complex()
                from .parse import format_poly

                s = f"minpoly:{format_poly(p.defining)}@{z.real!r},{z.imag!r}"
            else:
                z = p.approx.to_complex()
                s = f"approx:{z.real!r},{z.imag!r}"
            out.append({"point": s, "nu": nu})
        return {"marks": out}

    @classmethod
    def from_json(cls, data: dict) -> "Orbifold":
        from .parse import parse, parse_point

        marks = []
        for entry in data["marks"]:
            s = entry["point"]
            nu = int(entry["nu"])
            if s.startswith("minpoly:"):
                body, loc = s[len("minpoly:"):].split("@")
                re_s, im_s = loc.split(",")
                poly_rf = parse(body)
                if poly_rf.den.degree != 0:
                    raise BadOrbifoldError("minpoly must be polynomial")
                approx = ComplexApprox(float(re_s), float(im_s), 1e-6)
                marks.append((AlgebraicPoint(defining=poly_rf.num, approx=approx), nu))
            elif s.startswith("approx:"):
                re_s, im_s = s[len("approx:"):].split(",")
                approx = ComplexApprox(float(re_s), float(im_s), 1e-6)
                marks.append((AlgebraicPoint(approx=approx), nu))
            else:
                marks.append((AlgebraicPoint.from_exact(parse_point(s)), nu))
        return cls(marks)


def preceq(o1: Orbifold, o2: Orbifold) -> bool:
    """o1 preceq o2: every mark of o1 divides the mark of o2 at the same point."""
    for p, nu in o1.marks:
        if o2.nu_at(p) % nu != 0:
            return False
    return True


def transport(o: Orbifold, m) -> Orbifold:
    """Push an orbifold forward through a Mobius map (exact marks only)."""
    marks = []
    for p, nu in o.marks:
        if p.exact is None:
            raise PrecisionError("cannot transport a non-exact mark exactly")
        marks.append((AlgebraicPoint(exact=m.apply(p.exact)), nu))
    return Orbifold.unchecked(marks)


# -- fibers -------------------------------------------------------------------


def exact_fiber(f: RatFunc, w: ProjPoint, prec: int = 128) -> list[tuple[AlgebraicPoint, int]]:
    """Fiber f^{-1}(w) for an exact w, as (point, local degree) pairs summing
    to deg f."""
    out: list[tuple[AlgebraicPoint, int]] = []
    if w.is_infinity:
        g = f.den
    else:
        g = f.num - f.den * w.value
    if g.degree > 0:
        out.extend(root_points(g, prec))
    if evaluate(f, INF) == w:
        e = f.local_degree_at_infinity()
        out.append((AlgebraicPoint.infinity(), e))
    total = sum(e for _, e in out)
    if total != f.degree:
        raise PrecisionError(f"fiber degree defect over {w}: {total} != {f.degree}")
    return out


def _numeric_fiber(f: RatFunc, w: AlgebraicPoint, crit: list[CriticalDatum],
                   prec: int = 128) -> list[tuple[AlgebraicPoint, int]]:
    """Fiber over a non-exact value: critical points matched by value, then the
    remaining simple points found numerically after deflation."""
    out: list[tuple[AlgebraicPoint, int]] = []
    for d in crit:
        if d.value.same_point(w):
            out.append((d.point, d.local_degree))
    inf_val = AlgebraicPoint(exact=evaluate(f, INF))
    if inf_val.same_point(w) and not any(p.is_infinity for p, _ in out):
        out.append((AlgebraicPoint.infinity(), 1))
    known = sum(e for _, e in out)
    remaining = f.degree - known
    if remaining < 0:
        raise PrecisionError("fiber multiplicity overflow")
    if remaining > 0:
        wp = 128 if prec == 53 else prec
        with mpmath.workprec(wp):
            wc = w.approx.to_mpc() if w.approx is not None else mpmath.mpc(0)
            pn = poly_to_numbers(f.num, wp)
            pd = poly_to_numbers(f.den, wp)
            n = max(len(pn), len(pd))
            pn = pn + [0] * (n - len(pn))
            pd = pd + [0] * (n - len(pd))
            cs = [a - wc * b for a, b in zip(pn, pd)]
            while cs and abs(cs[-1]) < mpmath.mpf(2) ** (10 - wp) * (1 + max(abs(c) for c in cs)):
                cs.pop()
            # deflate the known (multiple) roots at full working precision
            for p, e in out:
                if p.is_infinity:
                    continue
                if p.exact is not None:
                    from .numeric import scalar_to_mpc

                    z0 = scalar_to_mpc(p.exact.value)
                else:
                    z0 = p.approx.to_mpc()
                for _ in range(e):
                    q = [0] * (len(cs) - 1)
                    acc = cs[-1]
                    for k in range(len(cs) - 2, -1, -1):
                        q[k] = acc
                        acc = cs[k] + z0 * acc
                    cs = q
            if len(cs) - 1 != remaining:
                raise PrecisionError("deflated fiber degree mismatch")
            simple = aberth(cs, wp)
        for ap in simple:
            out.append((AlgebraicPoint(approx=ap), 1))
    return out


def fiber_of(f: RatFunc, w: AlgebraicPoint, crit: list[CriticalDatum] | None = None,
             prec: int = 128) -> list[tuple[AlgebraicPoint, int]]:
    if crit is None:
        crit = critical_data(f, prec)
    if w.exact is not None:
        fiber = exact_fiber(f, w.exact, prec)
        # prefer critical-point representatives so identity stays coherent
        out = []
        for p, e in fiber:
            rep = p
            for d in crit:
                if d.point.same_point(p):
                    rep = d.point
                    break
            out.append((rep, e))
        return out
    return _numeric_fiber(f, w, crit, prec)


def image_point(f: RatFunc, z: AlgebraicPoint, prec: int = 128) -> AlgebraicPoint:
    """f(z) as an AlgebraicPoint."""
    from .numeric import _value_point

    return _value_point(f, z, prec)


# -- the calculus ---------------------------------------------------------------


def _kind_at(nu1: int, e: int, nu2: int) -> MapKind:
    if nu2 == nu1 * e:
        return MapKind.Covering
    if nu2 == nu1 * math.gcd(e, nu2):
        return MapKind.MinimalHolomorphic
    if (nu1 * e) % nu2 == 0:
        return MapKind.Holomorphic
    return MapKind.NotHolomorphic


def classify_map(f: RatFunc, o1: Orbifold, o2: Orbifold,
                 crit: list[CriticalDatum] | None = None, prec: int = 128) -> MapKind:
    """Strongest kind (covering / minimal holomorphic / holomorphic) that f
    satisfies as a map o1 -> o2, checked on the full finite support."""
    if f.degree < 1:
        raise ValueError("classify_map needs deg f >= 1")
    if crit is None:
        crit = critical_data(f, prec) if f.degree >= 2 else []
    kind = MapKind.Covering

    handled: list[AlgebraicPoint] = []

    def consider(z: AlgebraicPoint, e: int, nu2: int):
        nonlocal kind
        for h in handled:
            if h.same_point(z):
                return
        handled.append(z)
        nu1 = o1.nu_at(z)
        kind = min(kind, _kind_at(nu1, e, nu2))

    # critical points and marks of o1 (their images decide nu2)
    point_sets: list[tuple[AlgebraicPoint, int]] = []
    for d in crit:
        point_sets.append((d.point, d.local_degree))
    for p, _ in o1.marks:
        e = 1
        for d in crit:
            if d.point.same_point(p):
                e = d.local_degree
                break
        point_sets.append((p, e))
    for z, e in point_sets:
        img = image_point(f, z, prec)
        consider(z, e, o2.nu_at(img))

    # fibers over marks of o2: anonymous simple preimages enter by count only
    for w, nu2 in o2.marks:
        fiber = fiber_of(f, w, crit, prec)
        anon = 0
        for z, e in fiber:
            if e == 1 and o1.nu_at(z) == 1:
                anon += 1
                continue
            consider(z, e, nu2)
        if anon > 0:
            kind = min(kind, _kind_at(1, 1, nu2))
    return kind


def canonical_orbifolds(f: RatFunc, crit: list[CriticalDatum] | None = None,
                        prec: int = 128) -> tuple[Orbifold, Orbifold]:
    """The canonical pair (O1^f, O2^f): nu2 = lcm of local degrees over each
    fiber, nu1 = nu2(f(z)) / deg_z f; f: O1^f -> O2^f is a covering map."""
    if f.degree < 2:
        raise ValueError("canonical orbifolds need deg f >= 2")
    if crit is None:
        crit = critical_data(f, prec)
    values = dedup_points([d.value for d in crit])
    marks2: list[tuple[AlgebraicPoint, int]] = []
    marks1: list[tuple[AlgebraicPoint, int]] = []
    for w in values:
        es = [d.local_degree for d in crit if d.value.same_point(w)]
        nu2 = math.lcm(*es)
        marks2.append((w, nu2))
        for z, e in fiber_of(f, w, crit, prec):
            nu1, rem = divmod(nu2, e)
            if rem != 0:
                raise PrecisionError("local degree does not divide fiber lcm")
            if nu1 > 1:
                marks1.append((z, nu1))
    o2 = Orbifold(marks2)
    o1 = Orbifold(dedup_marks(marks1))
    if classify_map(f, o1, o2, crit, prec) != MapKind.Covering:
        raise PrecisionError("canonical pair failed the covering verification")
    return o1, o2


def dedup_marks(marks: list[tuple[AlgebraicPoint, int]]) -> list[tuple[AlgebraicPoint, int]]:
    out: list[tuple[AlgebraicPoint, int]] = []
    for p, nu in marks:
        for i, (q, mu) in enumerate(out):
            if p.same_point(q):
                if mu != nu:
                    raise PrecisionError("inconsistent ramification at one point")
                break
        else:
            out.append((p, nu))
    return out


@dataclass
class PullbackResult:
    orbifold: Orbifold
    good: bool


def pullback(f: RatFunc, o: Orbifold, crit: list[CriticalDatum] | None = None,
             prec: int = 128) -> PullbackResult:
    """The unique orbifold f*o making f: f*o -> o minimal holomorphic
    (nu1 = nu2 / gcd(deg_z f, nu2) at every preimage)."""
    if f.degree < 1:
        raise ValueError("pullback needs deg f >= 1")
    if crit is None:
        crit = critical_data(f, prec) if f.degree >= 2 else []
    marks: list[tuple[AlgebraicPoint, int]] = []
    for w, nu2 in o.marks:
        for z, e in fiber_of(f, w, crit, prec):
            nu1 = nu2 // math.gcd(e, nu2)
            if nu1 > 1:
                marks.append((z, nu1))
    marks = dedup_marks(marks)
    try:
        return PullbackResult(Orbifold(marks), True)
    except BadOrbifoldError:
        return PullbackResult(Orbifold.unchecked(marks), False)
