"""Monodromy and fiber-product component analysis.

Components of the curve f(x) = g(y) are orbits of the simultaneous monodromy
action on sheet pairs; the genus of each component comes from the
Riemann-Hurwitz cycle count of the pair permutations restricted to the orbit.
This is exact once the permutations are certified, and scales to iterates
without any symbolic bivariate factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import permgroup as PG
from .errors import BudgetError, PrecisionError, PreconditionError
from .numeric import (
    aberth,
    build_loops,
    critical_data,
    loop_waypoints,
    poly_to_numbers,
    run_ladder,
    track,
)
from .orbifold import canonical_orbifolds
from .points import AlgebraicPoint, chordal, dedup_points
from .ratfunc import RatFunc, compose

MONODROMY_DEGREE_CAP = 512


@dataclass
class MonodromyData:
    """Branch values and fiber permutations of one map around a common base
    point; permutations are listed in loop order and multiply (last first)
    to the identity."""

    map: RatFunc
    base_point: complex
    branch_values: list[AlgebraicPoint]
    permutations: list[list[int]]
    group_order: int

    @property
    def degree(self) -> int:
        return self.map.degree


@dataclass
class CurveComponent:
    """One irreducible component of {f(x) = g(y)} as a pair-sheet orbit."""

    orbit: tuple[tuple[int, int], ...]
    deg_p: int
    deg_q: int
    genus: int

    def to_json(self) -> dict:
        return {"deg_p": self.deg_p, "deg_q": self.deg_q, "genus": self.genus,
                "orbit_size": len(self.orbit)}


@dataclass
class FiberDecomposition:
    components: list[CurveComponent]

    @property
    def n(self) -> int:
        return len(self.components)

    def min_genus(self) -> int:
        return min(c.genus for c in self.components)

    def to_json(self) -> dict:
        return {"n": self.n, "components": [c.to_json() for c in self.components]}


# -- shared tracking machinery ---------------------------------------------------


def _fiber_at(f: RatFunc, t: complex, prec: int):
    pn = poly_to_numbers(f.num, prec)
    pd = poly_to_numbers(f.den, prec)
    n = max(len(pn), len(pd))
    pn = pn + [0] * (n - len(pn))
    pd = pd + [0] * (n - len(pd))
    return aberth([a - t * b for a, b in zip(pn, pd)], prec)


class _PermSystem:
    """Aligned monodromy permutations of one or two maps around the merged
    branch-value set (finite values loop-ordered, infinity last)."""

    def __init__(self, maps: list[RatFunc], prec: int):
        self.maps = maps
        crit_prec = 128 if prec == 53 else prec
        self.crits = [critical_data(m, crit_prec) for m in maps]
        branch_pts: list[AlgebraicPoint] = []
        for crit in self.crits:
            for v in dedup_points([d.value for d in crit]):
                if not any(v.same_point(w) for w in branch_pts):
                    branch_pts.append(v)
        finite = sorted((p for p in branch_pts if not p.is_infinity),
                        key=lambda p: p.sort_key())
        if not finite:
            raise PrecisionError("no finite branch values to anchor loops")
        centers = [p.to_complex() for p in finite]

        loops = None
        base = None
        fibers = None
        for seed in range(8):
            loops = build_loops(centers, angle_seed=seed)
            base = loops.base
            fibers = []
            for f in maps:
                fiber = _fiber_at(f, base, prec)
                if len(fiber) != f.degree:
                    fibers = None
                    break
                fibers.append(fiber)
            if fibers is not None:
                break
        if fibers is None:
            raise PrecisionError("no base point with full finite fibers")

        self.base = base
        perms_per_map = []
        for f, fiber in zip(maps, fibers):
            perms = [track(f, loop_waypoints(loops, i), fiber, prec=prec,
                           branch_centers=centers).permutation
                     for i in loops.order]
            perms_per_map.append(perms)

        self.points = [finite[i] for i in loops.order] + [AlgebraicPoint.infinity()]
        self.perms: list[list[list[int]]] = []
        for idx, f in enumerate(maps):
            deg = f.degree
            prod = PG.identity(deg)
            for p in perms_per_map[idx]:
                prod = PG.multiply(p, prod)
            sigma_inf = PG.inverse(prod)
            inf_branched = any(d.value.is_infinity for d in self.crits[idx])
            if not inf_branched and sigma_inf != PG.identity(deg):
                raise PrecisionError("nontrivial monodromy around an unbranched point")
            full = perms_per_map[idx] + [sigma_inf]
            total = sum(deg - PG.cycle_count(p) for p in full)
            if total != 2 * deg - 2:
                raise PrecisionError(
                    f"monodromy fails Riemann-Hurwitz: {total} != {2 * deg - 2}")
            self.perms.append(full)


def monodromy(f: RatFunc, prec: int | None = None) -> MonodromyData:
    """Monodromy permutations of f around its branch values, certified by the
    Riemann-Hurwitz count and transitivity."""
    if f.degree < 2:
        raise ValueError("monodromy needs deg f >= 2")
    if f.degree > MONODROMY_DEGREE_CAP:
        raise BudgetError(f"degree {f.degree} exceeds monodromy cap")

    def attempt(bits):
        sys = _PermSystem([f], bits)
        perms = sys.perms[0]
        keep = [(p, s) for p, s in zip(sys.points, perms)
                if s != PG.identity(f.degree)]
        pts_k = [p for p, _ in keep]
        perms_k = [s for _, s in keep]
        if not PG.is_transitive(perms_k, f.degree):
            raise PrecisionError("monodromy group is not transitive")
        order = PG.group_order(perms_k, f.degree)
        return MonodromyData(map=f, base_point=sys.base, branch_values=pts_k,
                             permutations=perms_k, group_order=order)

    return run_ladder(attempt)


def fiber_components(f: RatFunc, g: RatFunc, prec: int | None = None) -> FiberDecomposition:
    """Irreducible components of {f(x) = g(y)} with projection degrees and
    genera, via orbits of the simultaneous monodromy action on sheet pairs."""
    if f.degree < 1 or g.degree < 1:
        raise ValueError("fiber_components needs nonconstant maps")
    if f.degree == 1 or g.degree == 1:
        return _degree_one_shortcut(f, g)
    if f.degree > MONODROMY_DEGREE_CAP or g.degree > MONODROMY_DEGREE_CAP:
        raise BudgetError("degree exceeds monodromy cap")

    def attempt(bits):
        sys = _PermSystem([f, g], bits)
        return _components_from_perms(f.degree, g.degree, sys.perms[0], sys.perms[1])

    return run_ladder(attempt)


def _degree_one_shortcut(f: RatFunc, g: RatFunc) -> FiberDecomposition:
    if f.degree == 1:
        orbit = tuple((0, j) for j in range(g.degree))
        comp = CurveComponent(orbit=orbit, deg_p=g.degree, deg_q=1, genus=0)
    else:
        orbit = tuple((i, 0) for i in range(f.degree))
        comp = CurveComponent(orbit=orbit, deg_p=1, deg_q=f.degree, genus=0)
    return FiberDecomposition([comp])


def _components_from_perms(m: int, n: int, sigmas: list[list[int]],
                           taus: list[list[int]]) -> FiberDecomposition:
    """Orbit decomposition of the pair action with Riemann-Hurwitz genera."""
    pairs = [(i, j) for i in range(m) for j in range(n)]
    index = {p: k for k, p in enumerate(pairs)}
    pair_perms = []
    for s, t in zip(sigmas, taus):
        pair_perms.append([index[(s[i], t[j])] for (i, j) in pairs])
    orbit_sets = PG.orbits(pair_perms, len(pairs))

    comps = []
    for orb in orbit_sets:
        size = len(orb)
        if size % m != 0 or size % n != 0:
            raise PrecisionError("orbit size incompatible with projections")
        chi = 2 * size
        pos = {k: a for a, k in enumerate(orb)}
        for p in pair_perms:
            restricted = [pos[p[k]] for k in orb]
            chi -= size - PG.cycle_count(restricted)
        if chi % 2 != 0 or chi > 2:
            raise PrecisionError("component Euler characteristic out of range")
        genus = (2 - chi) // 2
        comps.append(CurveComponent(
            orbit=tuple(pairs[k] for k in orb),
            deg_p=size // m, deg_q=size // n, genus=genus))

    comps.sort(key=lambda c: c.orbit[0])
    dec = FiberDecomposition(comps)
    if sum(c.deg_p for c in comps) != n or sum(c.deg_q for c in comps) != m:
        raise PrecisionError("projection degree sums violated")
    if dec.n > math.gcd(m, n):
        raise PrecisionError("component count exceeds gcd bound")
    return dec


# -- derived analyses -------------------------------------------------------------


def genus_sequence(A: RatFunc, U: RatFunc, d_max: int) -> list[dict]:
    """Component table of A^(o d)(x) = U(y) for d = 1..d_max."""
    if A.degree < 2 or U.degree < 1:
        raise ValueError("genus_sequence needs deg A >= 2 and nonconstant U")
    if A.degree**d_max > MONODROMY_DEGREE_CAP:
        raise BudgetError(
            f"deg A^{d_max} = {A.degree ** d_max} exceeds cap {MONODROMY_DEGREE_CAP}")
    rows = []
    F = RatFunc.identity()
    for d in range(1, d_max + 1):
        F = compose(A, F)
        dec = fiber_components(F, U)
        rows.append({
            "d": d,
            "n": dec.n,
            "min_genus": dec.min_genus(),
            "components": [c.to_json() for c in dec.components],
        })
    return rows


@dataclass
class GoodSolutionReport:
    """Diagnostics for the three good-solution conditions of f o p = g o q."""

    unique_component: bool
    no_common_right_factor: bool
    degrees_match: bool

    @property
    def good(self) -> bool:
        return self.unique_component and self.no_common_right_factor

    def to_json(self) -> dict:
        return {"unique_component": self.unique_component,
                "no_common_right_factor": self.no_common_right_factor,
                "degrees_match": self.degrees_match,
                "good": self.good}


def check_good_solution(f: RatFunc, p: RatFunc, g: RatFunc, q: RatFunc) -> GoodSolutionReport:
    """Evaluate the good-solution conditions for f o p = g o q (verified
    exactly first).

    The common-right-factor degree is the parametrization degree of (p, q)
    onto the component it traces: deg f * deg p / |orbit|."""
    if compose(f, p) != compose(g, q):
        raise ValueError("f o p != g o q")
    degrees_match = (f.degree == q.degree) and (g.degree == p.degree)

    if f.degree == 1 or g.degree == 1:
        dec = _degree_one_shortcut(f, g)
        deg_w = (f.degree * p.degree) // len(dec.components[0].orbit)
        return GoodSolutionReport(True, deg_w == 1, degrees_match)

    def attempt(bits):
        sys = _PermSystem([f, g], bits)
        dec = _components_from_perms(f.degree, g.degree, sys.perms[0], sys.perms[1])
        base = sys.base
        fx = [a.to_complex() for a in _fiber_at(f, base, bits)]
        fy = [a.to_complex() for a in _fiber_at(g, base, bits)]
        h = compose(f, p)
        hz = _fiber_at(h, base, bits)
        if not hz:
            raise PrecisionError("empty composite fiber")
        z0 = hz[0].to_complex()
        x0 = _eval_complex(p, z0)
        y0 = _eval_complex(q, z0)
        i0 = _nearest(x0, fx)
        j0 = _nearest(y0, fy)
        orb = next(c for c in dec.components if (i0, j0) in c.orbit)
        if (f.degree * p.degree) % len(orb.orbit) != 0:
            raise PrecisionError("parametrization degree mismatch")
        deg_w = (f.degree * p.degree) // len(orb.orbit)
        return GoodSolutionReport(dec.n == 1, deg_w == 1, degrees_match)

    return run_ladder(attempt)


def _eval_complex(f: RatFunc, z: complex) -> complex | None:
    nv = f.num.eval(z)
    dv = f.den.eval(z)
    if abs(dv) == 0:
        return None
    return nv / dv


def _nearest(z, candidates: list[complex]) -> int:
    ds = sorted((chordal(z, c), i) for i, c in enumerate(candidates))
    if len(ds) > 1 and ds[1][0] < 3 * ds[0][0]:
        raise PrecisionError("ambiguous sheet identification")
    return ds[0][1]


def theorem_m2_check(W: RatFunc, P: RatFunc) -> dict:
    """Verify chi(E) <= 2(deg W - 1) - deg P / 42 on the unique component of
    the fiber product of P and W (preconditions enforced, exact comparison)."""
    _, o2w = canonical_orbifolds(W)
    chi_w = o2w.euler_char()
    if chi_w >= 0:
        raise PreconditionError(f"chi(O2^W) = {chi_w} >= 0")
    dec = fiber_components(P, W)
    if dec.n != 1:
        raise PreconditionError(f"fiber product has {dec.n} components, not 1")
    comp = dec.components[0]
    chi_e = Fraction(2 - 2 * comp.genus)
    bound = Fraction(2) * (W.degree - 1) - Fraction(P.degree, 42)
    return {
        "holds": chi_e <= bound,
        "chi_E": chi_e,
        "bound": bound,
        "genus": comp.genus,
        "chi_O2W": chi_w,
    }
