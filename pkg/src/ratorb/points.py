"""Points of P^1 with mixed exact/algebraic/numeric identity.

An AlgebraicPoint carries up to three views of the same point: an exact value
in the working field Q(sqrt(d)), an exact square-free defining polynomial over
the field, and an isolating numeric approximation. Identity uses the strongest
data available; purely numeric comparison applies a separation safety margin.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from . import poly as P
from .poly import Poly
from .ratfunc import INF, ProjPoint
from .scalar import Scalar

#: chordal-distance threshold under which two purely numeric points are merged
NUMERIC_MERGE_TOL = 1e-8


class ComplexApprox:
    """A complex value with an error radius (disk certainly containing the point)."""

    __slots__ = ("re", "im", "radius")

    def __init__(self, re, im, radius):
        # never re-round an existing mpf: the ambient context precision may be
        # far below the precision the value was computed at
        self.re = re if isinstance(re, mpmath.mpf) else mpmath.mpf(re)
        self.im = im if isinstance(im, mpmath.mpf) else mpmath.mpf(im)
        self.radius = radius if isinstance(radius, mpmath.mpf) else mpmath.mpf(radius)

    @classmethod
    def from_mpc(cls, z, radius) -> "ComplexApprox":
        return cls(mpmath.mpf(z.real), mpmath.mpf(z.imag), radius)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_mpc(self):
        return mpmath.mpc(self.re, self.im)

    def dist(self, other: "ComplexApprox"):
        return abs(self.to_mpc() - other.to_mpc())

    def overlaps(self, other: "ComplexApprox", inflate: float = 4.0) -> bool:
        return self.dist(other) <= inflate * (self.radius + other.radius) + NUMERIC_MERGE_TOL

    def __repr__(self):
        return f"ComplexApprox({complex(self.to_complex())}, r={float(self.radius):.3g})"


def chordal(x: complex | None, y: complex | None) -> float:
    """Chordal distance on the sphere; None encodes infinity."""
    import math

    if x is None and y is None:
        return 0.0
    if x is None:
        return 1.0 / math.sqrt(1.0 + abs(y) ** 2)
    if y is None:
        return 1.0 / math.sqrt(1.0 + abs(x) ** 2)
    return abs(x - y) / math.sqrt((1.0 + abs(x) ** 2) * (1.0 + abs(y) ** 2))


class AlgebraicPoint:
    """A point of P^1 known exactly, algebraically, or numerically."""

    __slots__ = ("exact", "defining", "approx")

    def __init__(self, exact: ProjPoint | None = None,
                 defining: Poly | None = None,
                 approx: ComplexApprox | None = None):
        if exact is None and approx is None:
            raise ValueError("point needs an exact value or an approximation")
        self.exact = exact
        self.defining = defining
        self.approx = approx

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_exact(cls, v) -> "AlgebraicPoint":
        p = v if isinstance(v, ProjPoint) else ProjPoint(Scalar.coerce(v))
        return cls(exact=p)

    @classmethod
    def infinity(cls) -> "AlgebraicPoint":
        return cls(exact=INF)

    @classmethod
    def from_algebraic(cls, defining: Poly, approx: ComplexApprox) -> "AlgebraicPoint":
        return cls(defining=defining, approx=approx)

    # -- views ----------------------------------------------------------------

    @property
    def is_infinity(self) -> bool:
        return self.exact is not None and self.exact.is_infinity

    def to_complex(self) -> complex | None:
        """Numeric view; None means infinity."""
        if self.is_infinity:
            return None
        if self.exact is not None:
            return complex(self.exact.value)
        return self.approx.to_complex()

    def sort_key(self):
        z = self.to_complex()
        if z is None:
            return (1, 0.0, 0.0)
        return (0, round(z.real, 9), round(z.imag, 9))

    def __repr__(self):
        if self.exact is not None:
            return f"Point({self.exact})"
        return f"Point(~{self.approx.to_complex():.6g})"

    def __str__(self):
        if self.exact is not None:
            return str(self.exact)
        z = self.approx.to_complex()
        return f"~({z.real:.9g}{z.imag:+.9g}j)"

    # -- identity ---------------------------------------------------------------

    def same_point(self, other: "AlgebraicPoint") -> bool:
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        if self.exact is not None:
            return other._matches_exact(self.exact)
        if other.exact is not None:
            return self._matches_exact(other.exact)
        # both inexact
        if self.defining is not None and other.defining is not None:
            try:
                g = P.gcd(self.defining, other.defining)
            except Exception:
                g = None
            if g is not None:
                if g.degree <= 0:
                    return False
                if not self.approx.overlaps(other.approx):
                    return False
                return True
        za, zb = self.to_complex(), other.to_complex()
        return chordal(za, zb) < NUMERIC_MERGE_TOL or self.approx.overlaps(other.approx)

    def _matches_exact(self, e: ProjPoint) -> bool:
        if e.is_infinity:
            # a root of a defining polynomial is finite; approx-only points
            # match infinity by chordal proximity
            if self.defining is not None:
                return False
            return chordal(self.to_complex(), None) < NUMERIC_MERGE_TOL
        if self.defining is not None:
            try:
                if not self.defining.eval(e.value).is_zero():
                    return False
            except Exception:
                return False
            # the defining polynomial may have several roots; the exact value
            # must lie inside this point's isolating disk
            tol = max(4.0 * float(self.approx.radius), NUMERIC_MERGE_TOL)
            return chordal(self.to_complex(), complex(e.value)) < tol
        return chordal(self.to_complex(), complex(e.value)) < NUMERIC_MERGE_TOL


def dedup_points(points: list[AlgebraicPoint]) -> list[AlgebraicPoint]:
    """Collapse a list of points by identity, preferring exact representatives."""
    out: list[AlgebraicPoint] = []
    for p in points:
        for i, q in enumerate(out):
            if p.same_point(q):
                if q.exact is None and p.exact is not None:
                    out[i] = p
                break
        else:
            out.append(p)
    return out


def find_point(p: AlgebraicPoint, pool: list[AlgebraicPoint]) -> int | None:
    for i, q in enumerate(pool):
        if p.same_point(q):
            return i
    return None


# -- recognition of exact values from numeric roots ---------------------------


def recognize_in_factor(factor: Poly, approx: ComplexApprox,
                        max_denominator: int = 10**9) -> ProjPoint | None:
    """Try to identify the root of `factor` isolated by `approx` as an exact
    rational or quadratic-irrational value; verified exactly before returning."""
    if factor.degree == 1:
        return ProjPoint(-factor[0] / factor[1])
    z = approx.to_mpc()
    # candidates are only accepted inside the isolating disk: the factor may
    # have several roots, and exact vanishing alone cannot tell them apart
    in_disk_tol = max(8.0 * float(approx.radius), 1e-9)
    # rational candidate from the real part
    if abs(z.imag) < in_disk_tol:
        cand = Fraction(float(z.real)).limit_denominator(max_denominator)
        try:
            if factor.eval(Scalar(cand)).is_zero():
                if abs(z.real - mpmath.mpf(cand.numerator) / cand.denominator) < in_disk_tol:
                    return ProjPoint(Scalar(cand))
        except Exception:
            pass
    # quadratic factors solve exactly over Q(sqrt(disc))
    if factor.degree == 2 and all(c.is_rational() for c in factor.coeffs):
        a = factor[2].as_fraction()
        b = factor[1].as_fraction()
        c = factor[0].as_fraction()
        disc = b * b - 4 * a * c
        root_disc = Scalar.sqrt_int(disc.numerator * disc.denominator) / disc.denominator
        for sign in (1, -1):
            r = (Scalar(-b) + root_disc * sign) / Scalar(2 * a)
            try:
                zc = complex(r)
            except Exception:
                continue
            if chordal(zc, complex(z)) < in_disk_tol:
                return ProjPoint(r)
    return None
