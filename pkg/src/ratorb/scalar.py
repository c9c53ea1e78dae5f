"""Exact scalars in Q(sqrt(d)) for one fixed square-free discriminant d.

A scalar is a + b*sqrt(d) with a, b rational and d a square-free integer;
d = 1 encodes plain Q (b folded into a). Arithmetic between scalars with
different nontrivial discriminants raises FieldMismatchError: the field is
fixed per computation, never silently widened.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, f) with n = s^2 * f and f square-free (sign kept on f)."""
    if n == 0:
        return 1, 0
    sign = 1 if n > 0 else -1
    n = abs(n)
    s = 1
    for p in _SMALL_PRIMES:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
    # trial divide the remainder; cheap at the sizes sqrt() is used for
    p = _SMALL_PRIMES[-1] + 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        p += 2
    return s, sign * n


class Scalar:
    """Element a + b*sqrt(d) of Q(sqrt(d)); immutable, exact."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=1):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d != 1:
            s, f = squarefree_split(d)
            if f == 1 or f == 0:
                a, b, d = a + b * s * (1 if f == 1 else 0), Fraction(0), 1
            else:
                b, d = b * s, f
        if b == 0:
            d = 1
        self.a = a
        self.b = b
        self.d = d

    # -- field bookkeeping -------------------------------------------------

    @staticmethod
    def _join(x: "Scalar", y: "Scalar") -> int:
        if x.d == 1:
            return y.d
        if y.d == 1 or y.d == x.d:
            return x.d
        raise FieldMismatchError(f"cannot mix sqrt({x.d}) with sqrt({y.d})")

    @classmethod
    def coerce(cls, v) -> "Scalar":
        if isinstance(v, Scalar):
            return v
        if isinstance(v, (int, Fraction)):
            return cls(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to Scalar")

    @classmethod
    def sqrt_int(cls, n: int) -> "Scalar":
        """Exact sqrt of an integer, as 'multiple of sqrt(squarefree part)'."""
        s, f = squarefree_split(n)
        if f == 0:
            return cls(0)
        if f == 1:
            return cls(s)
        return cls(0, s, f)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = Scalar.coerce(other)
        d = Scalar._join(self, o)
        return Scalar(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = Scalar.coerce(other)
        d = Scalar._join(self, o)
        return Scalar(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conj(self) -> "Scalar":
        """Galois conjugate a - b*sqrt(d)."""
        return Scalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2 (rational)."""
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        n = self.norm()
        return Scalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates & views ------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return not self.is_zero()

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise FieldMismatchError("scalar has a nonzero radical part")
        return self.a

    def __complex__(self):
        from math import sqrt

        if self.d >= 0:
            return complex(self.a + self.b * sqrt(self.d))
        return complex(float(self.a), float(self.b) * sqrt(-self.d))

    def __repr__(self):
        return f"Scalar({self!s})"

    def __str__(self):
        from .parse import format_scalar

        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
