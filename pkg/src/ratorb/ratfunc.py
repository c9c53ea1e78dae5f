"""Rational functions on the projective line over Q(sqrt(d)).

Every RatFunc is kept in the unique normal form gcd(num, den) = 1 with monic
denominator, so equality is syntactic. Evaluation is total on P^1: poles map
to infinity, infinity maps by leading coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from . import poly as P
from .errors import CapacityError, InvalidTransformError
from .poly import Poly
from .scalar import Scalar

DEFAULT_DEGREE_CAP = 4096


class ProjPoint:
    """A point of P^1: a finite Scalar value or the distinguished infinity."""

    __slots__ = ("value",)

    def __init__(self, value=None):
        self.value = None if value is None else Scalar.coerce(value)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = ProjPoint(other)
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.value == other.value

    def __hash__(self):
        return hash(None) if self.is_infinity else hash(self.value)

    def __repr__(self):
        return "ProjPoint(inf)" if self.is_infinity else f"ProjPoint({self.value})"

    def __str__(self):
        return "inf" if self.is_infinity else str(self.value)


INF = ProjPoint.infinity()


class RatFunc:
    """Reduced ratio of two polynomials; the maps studied by this package.

    >>> f = RatFunc(Poly([0, 1, 1]), Poly([2]))   # (z + z^2)/2
    >>> f.degree
    2
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        if reduce:
            g = P.gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading().inverse()
            num, den = num * lead, den * lead
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly.const(c))

    @classmethod
    def identity(cls) -> "RatFunc":
        return cls(Poly.x())

    @classmethod
    def from_fraction(cls, fr) -> "RatFunc":
        return cls.const(Scalar(fr))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self) -> bool:
        return self.degree == 0 or self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self!s})"

    def __str__(self):
        from .parse import format_ratfunc

        return format_ratfunc(self)

    # -- field operations (used by the parser and small constructions) ------

    def __add__(self, other):
        o = other if isinstance(other, RatFunc) else RatFunc.const(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = other if isinstance(other, RatFunc) else RatFunc.const(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = other if isinstance(other, RatFunc) else RatFunc.const(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, RatFunc) else RatFunc.const(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.const(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.const(1) / self) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    # -- analytic-flavored helpers ------------------------------------------

    def derivative_numerator(self) -> Poly:
        """Numerator P'Q - PQ' of the derivative (critical points live here)."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def value_at_infinity(self) -> ProjPoint:
        dn, dd = self.num.degree, self.den.degree
        if dn > dd:
            return INF
        if dn < dd:
            return ProjPoint(0)
        return ProjPoint(self.num.leading() / self.den.leading())

    def local_degree_at_infinity(self) -> int:
        """Local degree of the map at z = infinity."""
        dn, dd = self.num.degree, self.den.degree
        if dn != dd:
            return abs(dn - dd)
        c = self.num.leading() / self.den.leading()
        diff = self.num - self.den * c
        return max(dn, dd) - diff.degree

    def discriminant_field(self) -> int:
        d = self.num.discriminant_field()
        return d if d != 1 else self.den.discriminant_field()


def evaluate(f: RatFunc, p: ProjPoint | int | Fraction | Scalar) -> ProjPoint:
    """Evaluate f at a point of P^1, totally (poles give infinity)."""
    if not isinstance(p, ProjPoint):
        p = ProjPoint(p)
    if p.is_infinity:
        return f.value_at_infinity()
    nv = f.num.eval(p.value)
    dv = f.den.eval(p.value)
    if dv.is_zero():
        if nv.is_zero():
            raise ArithmeticError("unreduced rational function")
        return INF
    return ProjPoint(nv / dv)


def compose(f: RatFunc, g: RatFunc, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
    """f(g(z)), reduced; degrees multiply."""
    if f.degree * max(g.degree, 1) > degree_cap:
        raise CapacityError(
            f"composition degree {f.degree * g.degree} exceeds cap {degree_cap}"
        )
    n = max(f.num.degree, f.den.degree)
    r, s = g.num, g.den
    # powers r^i s^(n-i), shared between numerator and denominator
    rp = [Poly.const(1)]
    sp = [Poly.const(1)]
    for _ in range(n):
        rp.append(rp[-1] * r)
        sp.append(sp[-1] * s)
    num = Poly([])
    den = Poly([])
    for i in range(n + 1):
        w = rp[i] * sp[n - i]
        ci = f.num[i]
        if not ci.is_zero():
            num = num + w * ci
        di = f.den[i]
        if not di.is_zero():
            den = den + w * di
    if den.is_zero():
        raise ZeroDivisionError("composition has identically zero denominator")
    return RatFunc(num, den)


def iterate(f: RatFunc, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
    """n-fold composition f(f(...f(z))); n = 0 gives the identity."""
    if n < 0:
        raise ValueError("iterate needs n >= 0")
    if f.degree >= 2 and f.degree**n > degree_cap:
        raise CapacityError(f"deg^{n} = {f.degree ** n} exceeds cap {degree_cap}")
    out = RatFunc.identity()
    for _ in range(n):
        out = compose(f, out, degree_cap=degree_cap)
    return out


class Mobius:
    """Invertible map (a z + b)/(c z + d); ad - bc must not vanish."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = Scalar.coerce(a)
        self.b = Scalar.coerce(b)
        self.c = Scalar.coerce(c)
        self.d = Scalar.coerce(d)
        if (self.a * self.d - self.b * self.c).is_zero():
            raise InvalidTransformError("ad - bc = 0")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_ratfunc(cls, f: RatFunc) -> "Mobius":
        if f.degree != 1:
            raise InvalidTransformError("not a degree-1 map")
        return cls(f.num[1], f.num[0], f.den[1], f.den[0])

    @classmethod
    def through(cls, src: list, dst: list) -> "Mobius":
        """The Mobius map sending three distinct points src[i] -> dst[i]."""
        std_src = cls._to_standard(src)
        std_dst = cls._to_standard(dst)
        return std_dst.inverse().compose_mobius(std_src)

    @staticmethod
    def _to_standard(pts: list) -> "Mobius":
        # sends (p0, p1, p2) to (0, 1, infinity)
        p0, p1, p2 = [p if isinstance(p, ProjPoint) else ProjPoint(p) for p in pts]
        if p0 == p1 or p1 == p2 or p0 == p2:
            raise InvalidTransformError("points not distinct")
        if p2.is_infinity:
            if p1.is_infinity or p0.is_infinity:
                raise InvalidTransformError("points not distinct")
            s = (p1.value - p0.value).inverse()
            return Mobius(s, -s * p0.value, 0, 1)
        if p0.is_infinity:
            # z -> (p1 - p2)/(z - p2)
            return Mobius(0, p1.value - p2.value, 1, -p2.value)
        if p1.is_infinity:
            return Mobius(1, -p0.value, 1, -p2.value)
        k = (p1.value - p2.value) / (p1.value - p0.value)
        return Mobius(k, -k * p0.value, 1, -p2.value)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose_mobius(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(Poly([self.b, self.a]), Poly([self.d, self.c]))

    def apply(self, p: ProjPoint | int | Fraction | Scalar) -> ProjPoint:
        return evaluate(self.as_ratfunc(), p)

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        return self.as_ratfunc() == other.as_ratfunc()

    def __repr__(self):
        return f"Mobius({self.as_ratfunc()!s})"


def conjugate(f: RatFunc, m: Mobius | RatFunc) -> RatFunc:
    """m o f o m^{-1}; degree is preserved."""
    if isinstance(m, RatFunc):
        m = Mobius.from_ratfunc(m)
    mf = m.as_ratfunc()
    mi = m.inverse().as_ratfunc()
    return compose(mf, compose(f, mi))


def power(n: int) -> RatFunc:
    """z^n (n may be negative for z^-n)."""
    if n == 0:
        raise ValueError("power map needs n != 0")
    if n > 0:
        return RatFunc(Poly([0] * n + [1]), Poly.const(1), reduce=False)
    return RatFunc(Poly.const(1), Poly([0] * (-n) + [1]), reduce=False)


def chebyshev(n: int) -> RatFunc:
    """Chebyshev polynomial T_n with T_n(cos t) = cos nt."""
    if n < 1:
        raise ValueError("chebyshev needs n >= 1")
    t0, t1 = Poly.const(1), Poly.x()
    for _ in range(n - 1):
        t0, t1 = t1, Poly.x() * t1 * 2 - t0
    return RatFunc(t1, Poly.const(1), reduce=False)


def dfunc(n: int) -> RatFunc:
    """D_n = (z^n + z^-n)/2, the degree-2n Galois covering with signature {2,2,n}."""
    if n < 1:
        raise ValueError("dfunc needs n >= 1")
    num = Poly([0] * (2 * n) + [1]) + Poly.const(1)  # z^(2n) + 1
    den = Poly([0] * n + [2])  # 2 z^n
    return RatFunc(num, den)
