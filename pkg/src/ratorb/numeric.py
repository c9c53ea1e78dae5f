"""Certified-enough numeric layer: polynomial roots, critical data, and
analytic continuation of fibers along loops.

Nothing here is interval arithmetic; every computation runs under a
deterministic precision ladder (machine doubles, then mpmath at 128/256/512
bits) and re-certifies itself (separation factors, permutation sanity,
Riemann-Hurwitz counts). Failure at the top of the ladder raises
PrecisionError rather than returning an uncertified answer.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath

from .errors import PrecisionError, TrackingError
from .points import AlgebraicPoint, ComplexApprox, chordal, recognize_in_factor
from .poly import Poly, squarefree_decomposition
from .ratfunc import INF, ProjPoint, RatFunc, evaluate
from .scalar import Scalar

#: separation safety factor between tracked fiber points (spec value)
SEPARATION_SAFETY = 1e3

#: precision ladder in bits; stage 0 runs on machine complex numbers
PRECISION_LADDER = (53, 128, 256, 512)


def scalar_to_mpc(s: Scalar):
    re = mpmath.mpf(s.a.numerator) / s.a.denominator
    if s.b == 0:
        return mpmath.mpc(re, 0)
    rad = mpmath.mpf(s.b.numerator) / s.b.denominator
    if s.d >= 0:
        return mpmath.mpc(re + rad * mpmath.sqrt(s.d), 0)
    return mpmath.mpc(re, rad * mpmath.sqrt(-s.d))


def poly_to_numbers(p: Poly, prec: int) -> list:
    """Coefficients as machine complex (prec == 53) or mpc at prec bits."""
    if prec == 53:
        return [complex(c) for c in p.coeffs]
    with mpmath.workprec(prec):
        return [scalar_to_mpc(c) for c in p.coeffs]


def run_ladder(fn, start: int = 0):
    """Run fn(prec_bits) over the precision ladder, escalating on
    PrecisionError; deterministic."""
    last = None
    for prec in PRECISION_LADDER[start:]:
        try:
            return fn(prec)
        except PrecisionError as exc:
            last = exc
    raise PrecisionError(f"precision ladder exhausted: {last}")


# -- polynomial roots ----------------------------------------------------------


def _horner(cs, z):
    acc = z * 0
    for c in reversed(cs):
        acc = acc * z + c
    return acc


def _bini_radii(cs) -> list[float]:
    """Initial moduli from the Newton polygon of the coefficients (upper
    convex hull of (i, log |c_i|)), one radius per root."""
    n = len(cs) - 1
    ys = []
    for c in cs:
        a = abs(c)
        ys.append(math.log(float(a)) if a > 0 else -1e300)
    pts = list(enumerate(ys))
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    radii: list[float] = []
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        r = math.exp((yi - yj) / (j - i))
        r = min(max(r, 1e-150), 1e150)
        radii.extend([r] * (j - i))
    while len(radii) < n:
        radii.append(radii[-1] if radii else 1.0)
    return radii[:n]


def aberth(coeffs: list, prec: int, max_iter: int = 600) -> list:
    """Aberth-Ehrlich simultaneous iteration on a (numerically) square-free
    polynomial given by its coefficient list; returns approximations with
    per-root error radii. Initial points follow the Newton polygon; failed
    runs restart with deterministic perturbations."""
    if prec == 53:
        return _aberth_impl(coeffs, prec, max_iter)
    # all arithmetic (including coefficient normalization) must run at the
    # working precision: rounding the polynomial at 53 bits displaces
    # ill-conditioned roots far beyond the reported radii
    with mpmath.workprec(prec):
        return _aberth_impl(coeffs, prec, max_iter)


def _aberth_impl(coeffs: list, prec: int, max_iter: int) -> list:
    n = len(coeffs) - 1
    if n <= 0:
        return []
    lead = coeffs[-1]
    cs = [c / lead for c in coeffs]
    if n == 1:
        z = -cs[0]
        rad = abs(z) * (1e-15 if prec == 53 else float(mpmath.mpf(2) ** (4 - prec))) + 1e-300
        return [ComplexApprox(_num_re(z), _num_im(z), rad)]
    dcs = [cs[i] * i for i in range(1, n + 1)]
    radii = _bini_radii(cs)
    tol = 1e-13 if prec == 53 else mpmath.mpf(2) ** (20 - prec)

    def make_start(scale: float, offset: float):
        return [radii[k] * scale * cmath.exp(1j * (2 * math.pi * k / n + offset
                                                   + 0.37 * k * k / n))
                for k in range(n)]

    eps = 2.0**-52 if prec == 53 else float(mpmath.mpf(2) ** (1 - prec))

    def run(zs):
        zs = list(zs)
        for _ in range(max_iter):
            all_settled = True
            for k in range(n):
                pv = _horner(cs, zs[k])
                pd = _horner(dcs, zs[k])
                if abs(pd) == 0:
                    zs[k] = zs[k] * (1 + 1e-7) + 1e-7
                    all_settled = False
                    continue
                # evaluation-noise floor of the Horner scheme at this point
                az = abs(zs[k])
                amag = az * 0
                for c in reversed(cs):
                    amag = amag * az + abs(c)
                noise = 4 * n * eps * amag
                if abs(pv) <= noise:
                    continue  # converged to the achievable accuracy
                newton = pv / pd
                s = sum(1 / (zs[k] - zs[j]) for j in range(n) if j != k)
                denom = 1 - newton * s
                w = newton if abs(denom) == 0 else newton / denom
                zs[k] = zs[k] - w
                if abs(w) > tol * (1 + abs(zs[k])):
                    all_settled = False
            if all_settled:
                return zs
        return None

    attempts = [(1.0, 0.41), (1.0, 1.13), (0.5, 0.79), (2.0, 1.87), (1.0, 2.71)]

    def finish(zs):
        out = []
        for z in zs:
            pd = _horner(dcs, z)
            pv = _horner(cs, z)
            az = abs(z)
            amag = az * 0
            for c in reversed(cs):
                amag = amag * az + abs(c)
            noise = 4 * n * eps * amag
            if abs(pd) > 0:
                rad = float(n * (abs(pv) + noise) / abs(pd))
            else:
                rad = float(az) * 1e-6 + 1e-6
            out.append(ComplexApprox(_num_re(z), _num_im(z), rad))
        # roots of a square-free factor must be pairwise separated
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                if out[i].dist(out[j]) <= 8 * (out[i].radius + out[j].radius):
                    raise PrecisionError("root separation failed")
        return out

    for scale, offset in attempts:
        start = make_start(scale, offset)
        if prec != 53:
            start = [mpmath.mpc(z) for z in start]
        zs = run(start)
        if zs is not None:
            return finish(zs)
    raise PrecisionError(f"Aberth did not converge at {prec} bits")


def _num_re(z):
    if isinstance(z, complex):
        return z.real
    return mpmath.mpf(z.real)


def _num_im(z):
    if isinstance(z, complex):
        return z.imag
    return mpmath.mpf(z.imag)


def roots(p: Poly, prec: int = 128) -> list[tuple[ComplexApprox, int]]:
    """All complex roots of an exact polynomial with multiplicities
    (multiplicities recovered from exact square-free decomposition)."""
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    out = []
    for factor, mult in squarefree_decomposition(p):
        def attempt(bits, factor=factor):
            return aberth(poly_to_numbers(factor, bits), bits)
        start = PRECISION_LADDER.index(prec) if prec in PRECISION_LADDER else 0
        for approx in run_ladder(attempt, start=start):
            out.append((approx, mult))
    if sum(m for _, m in out) != p.degree:
        raise PrecisionError("root multiplicities do not sum to the degree")
    return out


def root_points(p: Poly, prec: int = 128) -> list[tuple[AlgebraicPoint, int]]:
    """Roots as AlgebraicPoints: exact when recognized (verified), otherwise
    algebraic with the square-free factor as defining polynomial."""
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    out = []
    for factor, mult in squarefree_decomposition(p):
        def attempt(bits, factor=factor):
            return aberth(poly_to_numbers(factor, bits), bits)
        start = PRECISION_LADDER.index(prec) if prec in PRECISION_LADDER else 0
        for approx in run_ladder(attempt, start=start):
            exact = recognize_in_factor(factor, approx)
            if exact is not None:
                out.append((AlgebraicPoint(exact=exact, defining=factor, approx=approx), mult))
            else:
                out.append((AlgebraicPoint.from_algebraic(factor, approx), mult))
    return out


# -- critical data -------------------------------------------------------------


@dataclass
class CriticalDatum:
    """A critical point with its local degree and critical value."""

    point: AlgebraicPoint
    local_degree: int
    value: AlgebraicPoint

    def __repr__(self):
        return f"CriticalDatum({self.point}, deg={self.local_degree}, value={self.value})"


def _defining_gcd_hits(z: AlgebraicPoint, g0: Poly) -> bool:
    """True when gcd(defining poly of z, g0) has a root inside z's disk."""
    from . import poly as P

    if z.defining is None or g0.degree < 1:
        return False
    try:
        g = P.gcd(g0, z.defining)
    except Exception:
        return False
    if g.degree <= 0:
        return False
    try:
        g_roots = aberth(poly_to_numbers(g, 128), 128)
    except PrecisionError:
        return False
    return any(r.overlaps(z.approx) for r in g_roots)


def _value_point(f: RatFunc, z: AlgebraicPoint, prec: int) -> AlgebraicPoint:
    """f(z) as an AlgebraicPoint (exact when z is exact)."""
    if z.exact is not None:
        v = evaluate(f, z.exact)
        return AlgebraicPoint(exact=v)
    # exact pole test: z is a pole of f iff its defining poly shares z with den
    if _defining_gcd_hits(z, f.den):
        return AlgebraicPoint.infinity()
    zc = z.approx.to_mpc()
    with mpmath.workprec(max(prec, 128)):
        nv = f.num.eval_mp(zc)
        dv = f.den.eval_mp(zc)
        if abs(dv) < mpmath.mpf(2) ** (-max(prec, 128) // 2):
            return AlgebraicPoint.infinity()
        w = nv / dv
    rad = float(z.approx.radius) * 100 + 1e-20
    ap = ComplexApprox(w.real, w.imag, rad)
    # try to recognize the value as rational (verified via exact coincidence
    # of a fiber: value v is attained at z iff gcd(num - v*den, defining) != 1)
    cand = _recognize_value(f, z, ap)
    if cand is not None:
        return AlgebraicPoint(exact=cand, approx=ap)
    return AlgebraicPoint(approx=ap)


def _recognize_value(f: RatFunc, z: AlgebraicPoint, ap: ComplexApprox) -> ProjPoint | None:
    from fractions import Fraction

    from . import poly as P

    if z.defining is None:
        return None
    w = ap.to_mpc()
    if abs(w.imag) > 1e-6:
        return None
    cand = Fraction(float(w.real)).limit_denominator(10**9)
    try:
        g = P.gcd(f.num - f.den * Scalar(cand), z.defining)
    except Exception:
        return None
    if g.degree <= 0:
        return None
    # the shared root must be the one isolated by z
    if not g.eval(Scalar(cand)).is_zero() and z.exact is None:
        # check numerically that z's disk contains a root of g
        try:
            g_roots = aberth(poly_to_numbers(g, 128), 128)
        except PrecisionError:
            return None
        if not any(r.overlaps(z.approx) for r in g_roots):
            return None
    if abs(float(w.real) - float(Fraction(cand))) > 1e-3:
        return None
    return ProjPoint(Scalar(cand))


def critical_data(f: RatFunc, prec: int = 128) -> list[CriticalDatum]:
    """Complete critical data of f: finite critical points from the derivative
    numerator (exact multiplicities), plus infinity when branched there.
    Sum of (local_degree - 1) always equals 2 deg f - 2."""
    if f.degree < 2:
        raise ValueError("critical data needs deg f >= 2")
    w = f.derivative_numerator()
    data: list[CriticalDatum] = []
    if not w.is_zero():
        for pt, mult in root_points(w, prec):
            e = mult + 1
            data.append(CriticalDatum(pt, e, _value_point(f, pt, prec)))
    e_inf = f.local_degree_at_infinity()
    if e_inf >= 2:
        data.append(CriticalDatum(AlgebraicPoint.infinity(), e_inf,
                                  AlgebraicPoint(exact=f.value_at_infinity())))
    total = sum(d.local_degree - 1 for d in data)
    if total != 2 * f.degree - 2:
        raise PrecisionError(
            f"Riemann-Hurwitz defect: sum(e-1) = {total} != {2 * f.degree - 2}")
    data.sort(key=lambda d: d.point.sort_key())
    return data


def local_degree_at(f: RatFunc, z: AlgebraicPoint,
                    crit: list[CriticalDatum] | None = None, prec: int = 128) -> int:
    if crit is None:
        crit = critical_data(f, prec)
    for d in crit:
        if d.point.same_point(z):
            return d.local_degree
    return 1


# -- loops around branch values --------------------------------------------------


@dataclass
class LoopSystem:
    """Deterministic star of loops around finite branch values."""

    base: complex
    centers: list[complex]
    radii: list[float]
    order: list[int] = field(default_factory=list)  # indices sorted by departure angle


def build_loops(branch_values: list[complex], angle_seed: int = 0) -> LoopSystem:
    """Circles around each finite branch value joined to a common base point;
    the base sits on a circle of radius 2(1 + max |bv|) at a deterministic
    angle keeping every connecting segment clear of other branch values."""
    if not branch_values:
        return LoopSystem(base=2.0 + 0.0j, centers=[], radii=[], order=[])
    big_r = 2.0 * (1.0 + max(abs(b) for b in branch_values))
    dmins = []
    base_radii = []
    for i, b in enumerate(branch_values):
        dmin = min((abs(b - c) for j, c in enumerate(branch_values) if j != i),
                   default=2.0)
        dmins.append(dmin)
        base_radii.append(min(dmin / 4.0, big_r / 8.0))

    def seg_clear(base, radii, floor_frac):
        # every connecting segment must keep an intrinsic distance from every
        # other branch value: near-branch passages make fibers nearly merge,
        # which no amount of precision fixes
        for i, b in enumerate(branch_values):
            v = b - base
            av2 = abs(v) ** 2
            for j, c in enumerate(branch_values):
                if i == j:
                    continue
                t = ((c - base) * v.conjugate()).real / av2
                t = min(1.0, max(0.0, t))
                proj = base + t * v
                if abs(c - proj) < max(2.5 * radii[j], floor_frac * dmins[j]):
                    return False
        return True

    # later tiers drop the intrinsic clearance floor: the delta-controlled
    # stepper handles close passages, the floor only keeps them cheap
    for floor_frac, shrink, n_angles in ((0.4, 1.0, 360), (0.4, 0.5, 360),
                                         (0.35, 0.25, 720), (0.3, 0.1, 720),
                                         (0.15, 0.04, 1440), (0.0, 0.25, 720),
                                         (0.0, 0.04, 1440)):
        radii = [r * shrink for r in base_radii]
        for k in range(n_angles):
            cand = big_r * cmath.exp(2j * math.pi * k / n_angles + 0.123j
                                     + 0.031j * angle_seed)
            angles = sorted(cmath.phase(b - cand) for b in branch_values)
            distinct = all(angles[i + 1] - angles[i] > 1e-7 for i in range(len(angles) - 1))
            if distinct and seg_clear(cand, radii, floor_frac):
                order = sorted(range(len(branch_values)),
                               key=lambda i: cmath.phase(branch_values[i] - cand))
                return LoopSystem(base=cand, centers=list(branch_values),
                                  radii=radii, order=order)
    raise PrecisionError("no admissible base point found for the loop system")


def loop_waypoints(sys: LoopSystem, i: int, arc_steps: int = 24) -> list[complex]:
    """Waypoints of the loop around branch value i: base -> circle entry ->
    counterclockwise circle -> back to base."""
    b = sys.centers[i]
    r = sys.radii[i]
    u = (sys.base - b) / abs(sys.base - b)
    entry = b + r * u
    pts = [sys.base, entry]
    phase0 = cmath.phase(u)
    for k in range(1, arc_steps + 1):
        pts.append(b + r * cmath.exp(1j * (phase0 + 2 * math.pi * k / arc_steps)))
    pts.append(sys.base)
    return pts


# -- fiber tracking ---------------------------------------------------------------


@dataclass
class FiberTrack:
    """Result of continuing a full fiber along one loop."""

    loop: list[complex]
    start_fiber: list[ComplexApprox]
    permutation: list[int]


class _Chart:
    """A tracked fiber point in the z-chart (0) or w = 1/z chart (1)."""

    __slots__ = ("chart", "pos")

    def __init__(self, chart, pos):
        self.chart = chart
        self.pos = pos

    def to_complex(self) -> complex | None:
        if self.chart == 0:
            return complex(self.pos)
        if abs(self.pos) == 0:
            return None
        return complex(1 / self.pos)

    def chordal_to(self, other: "_Chart") -> float:
        return chordal(self.to_complex(), other.to_complex())


def _num(x, prec):
    if prec == 53:
        return complex(x)
    return mpmath.mpc(x)


def _fiber_poly(f: RatFunc, prec: int):
    """Return callables g(chart, x, t) and g'(chart, x, t) for the fiber
    equation num(x) - t den(x) = 0 in either chart."""
    n = f.degree
    pn = poly_to_numbers(f.num, prec)
    pd = poly_to_numbers(f.den, prec)
    pn += [0] * (n + 1 - len(pn))
    pd += [0] * (n + 1 - len(pd))
    pn_rev = list(reversed(pn))
    pd_rev = list(reversed(pd))

    def val_and_deriv(chart, x, t):
        cn = pn if chart == 0 else pn_rev
        cd = pd if chart == 0 else pd_rev
        g = gd = x * 0
        for a, b in zip(reversed(cn), reversed(cd)):
            c = a - t * b
            gd = gd * x + g
            g = g * x + c
        return g, gd

    return val_and_deriv


def track(f: RatFunc, loop: list[complex], start_fiber: list[ComplexApprox],
          prec: int = 53, max_halvings: int = 45,
          branch_centers: list[complex] | None = None) -> FiberTrack:
    """Analytic continuation of the full fiber of f along a closed polyline
    that avoids the branch values of f. Returns the induced permutation
    (sheet i ends where sheet permutation[i] started).

    Parameter steps shrink with the distance to the nearest branch value:
    the fiber braids on exactly that scale, and a step that leaps over a
    close passage can land every point on a wrong sheet without tripping
    any local movement bound."""
    if branch_centers is None and f.degree >= 2:
        crit = critical_data(f, 128 if prec == 53 else prec)
        branch_centers = [d.value.to_complex() for d in d_finite_values(crit)]
    if prec == 53:
        return _track_impl(f, loop, start_fiber, prec, max_halvings, branch_centers or [])
    with mpmath.workprec(prec):
        return _track_impl(f, loop, start_fiber, prec, max_halvings, branch_centers or [])


def d_finite_values(crit) -> list:
    seen = []
    for d in crit:
        if d.value.is_infinity:
            continue
        if not any(d.value.same_point(p.value) for p in seen):
            seen.append(d)
    return seen


def _track_impl(f: RatFunc, loop: list[complex], start_fiber: list[ComplexApprox],
                prec: int, max_halvings: int, branch_centers: list[complex]) -> FiberTrack:
    n = len(start_fiber)
    val_and_deriv = _fiber_poly(f, prec)
    tol = 1e-11 if prec == 53 else mpmath.mpf(2) ** (24 - prec)
    collision_tol = SEPARATION_SAFETY * (1e-13 if prec == 53 else float(mpmath.mpf(2) ** (6 - prec)))

    def clearance(t) -> float:
        if not branch_centers:
            return float("inf")
        tc = complex(t)
        return min(abs(tc - c) for c in branch_centers)

    pts = []
    for ap in start_fiber:
        z = _num(ap.to_mpc(), prec) if prec != 53 else ap.to_complex()
        if abs(z) > 2:
            pts.append(_Chart(1, 1 / z))
        else:
            pts.append(_Chart(0, z))

    def newton(chart, x, t):
        for _ in range(14):
            g, gd = val_and_deriv(chart, x, t)
            if abs(gd) == 0:
                return None
            step = g / gd
            x = x - step
            if abs(step) <= tol * (1 + abs(x)):
                return x
        return None

    def min_sep():
        best = 2.0
        for i in range(n):
            for j in range(i + 1, n):
                best = min(best, pts[i].chordal_to(pts[j]))
        return best

    def advance(t0, t1):
        """Move every fiber point from parameter t0 to t1, recursively
        bisecting the parameter interval on failure."""
        depth_budget = max_halvings
        stack = [(t0, t1, 0)]
        while stack:
            a, b, depth = stack.pop()
            if depth > depth_budget:
                raise TrackingError("step collapse below minimum step")
            # refine wherever the step is large relative to the branch clearance
            delta = min(clearance(a), clearance(b))
            if abs(complex(b) - complex(a)) > max(0.5 * delta, 1e-12) and depth <= depth_budget - 1:
                mid = (a + b) / 2
                stack.append((mid, b, depth + 1))
                stack.append((a, mid, depth + 1))
                continue
            sep = min_sep()
            new_pts = []
            ok = True
            for p in pts:
                x = newton(p.chart, p.pos, b)
                if x is None:
                    ok = False
                    break
                cand = _Chart(p.chart, x)
                if p.chordal_to(cand) > max(sep / 3.0, 1e-9):
                    ok = False
                    break
                new_pts.append(cand)
            if not ok:
                mid = (a + b) / 2
                stack.append((mid, b, depth + 1))
                stack.append((a, mid, depth + 1))
                continue
            for i in range(n):
                pts[i] = new_pts[i]
            # chart hygiene + collision certificate
            for i, p in enumerate(pts):
                z = p.to_complex()
                if p.chart == 0 and abs(p.pos) > 2:
                    pts[i] = _Chart(1, 1 / p.pos)
                elif p.chart == 1 and z is not None and abs(z) < 0.5:
                    pts[i] = _Chart(0, 1 / p.pos)
            for i in range(n):
                for j in range(i + 1, n):
                    if pts[i].chordal_to(pts[j]) < collision_tol:
                        raise TrackingError("fiber collision")

    ts = [_num(w, prec) for w in loop]
    for k in range(len(ts) - 1):
        advance(ts[k], ts[k + 1])

    # match end configuration against the start fiber
    start_pos = [ap.to_complex() for ap in start_fiber]
    perm = [-1] * n
    used = [False] * n
    for i in range(n):
        end = pts[i].to_complex()
        dists = sorted((chordal(end, s), j) for j, s in enumerate(start_pos))
        d0, j0 = dists[0]
        if used[j0] or (len(dists) > 1 and dists[1][0] < 4 * d0):
            raise TrackingError("end fiber does not match start fiber cleanly")
        used[j0] = True
        perm[i] = j0
    return FiberTrack(loop=loop, start_fiber=start_fiber, permutation=perm)
