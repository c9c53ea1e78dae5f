"""Dense univariate polynomials over Q(sqrt(d)).

Coefficients are stored lowest degree first; the zero polynomial has an empty
coefficient list and degree -1.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import Scalar


class Poly:
    """Exact polynomial; immutable after construction.

    >>> Poly([1, 2, 1]) * Poly([-1, 1])
    Poly([-1, -1, 1, 1])
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Scalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([Scalar.coerce(c)])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Scalar:
        if self.is_zero():
            return Scalar(0)
        return self.coeffs[-1]

    def constant(self) -> Scalar:
        return self.coeffs[0] if self.coeffs else Scalar(0)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Scalar(0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            s = Scalar.coerce(other)
            return Poly([c * s for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Scalar(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Scalar(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        inv_lead = other.leading().inverse()
        dn = other.degree
        while len(r) - 1 >= dn and any(not c.is_zero() for c in r):
            while r and r[-1].is_zero():
                r.pop()
            if len(r) - 1 < dn:
                break
            k = len(r) - 1 - dn
            c = r[-1] * inv_lead
            q[k] = c
            for i, b in enumerate(other.coeffs):
                r[k + i] = r[k + i] - c * b
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly"):
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly"):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def eval(self, x):
        """Horner evaluation; x may be a Scalar, Fraction, int, or complex."""
        if isinstance(x, (int, Fraction)):
            x = Scalar(x)
        if isinstance(x, Scalar):
            acc = Scalar(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def eval_mp(self, x):
        """Horner evaluation at an mpmath mpc/mpf point."""
        from .numeric import scalar_to_mpc

        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + scalar_to_mpc(c)
        return acc

    def compose_poly(self, inner: "Poly") -> "Poly":
        """self(inner(x)), exact."""
        acc = Poly([])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(c)
        return acc

    def shift(self, c) -> "Poly":
        """self(x + c)."""
        return self.compose_poly(Poly([Scalar.coerce(c), Scalar(1)]))

    def reversed_coeffs(self, n: int | None = None) -> "Poly":
        """x^n * self(1/x) for n >= degree (default: degree)."""
        if n is None:
            n = max(self.degree, 0)
        return Poly([self[n - i] for i in range(n + 1)])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.leading().inverse()

    def discriminant_field(self) -> int:
        for c in self.coeffs:
            if c.d != 1:
                return c.d
        return 1


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the coefficient field (Euclid)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
        # renormalize to keep coefficient growth in check
        if not a.is_zero():
            a = a.monic()
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic()
    return (p // gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: return [(f_i, i)] with p = lc * prod f_i^i, f_i
    square-free, pairwise coprime, monic, nonconstant."""
    if p.degree <= 0:
        return []
    p = p.monic()
    d = p.derivative()
    a = gcd(p, d)
    b = p // a
    c = d // a
    out = []
    i = 1
    while b.degree > 0:
        z = c - b.derivative()
        f = gcd(b, z)
        if f.degree > 0:
            out.append((f.monic(), i))
        b = b // f
        c = z // f
        i += 1
    return out


def resultant(p: Poly, q: Poly) -> Scalar:
    """Resultant via the subresultant-free Euclidean recursion over the field."""
    if p.is_zero() or q.is_zero():
        return Scalar(0)
    a, b = p, q
    res = Scalar(1)
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return Scalar(0)
        res = res * (b.leading() ** (a.degree - r.degree)) * Scalar(
            (-1) ** (a.degree * b.degree)
        )
        a, b = b, r
    res = res * (b.leading() ** a.degree)
    return res


def form_resultant_int(p_coeffs: list[int], q_coeffs: list[int], n: int) -> int:
    """Resultant of two integer binary forms of formal degree n, via the
    Sylvester determinant with fraction-free (Bareiss) elimination."""
    pc = [p_coeffs[i] if i < len(p_coeffs) else 0 for i in range(n + 1)]
    qc = [q_coeffs[i] if i < len(q_coeffs) else 0 for i in range(n + 1)]
    size = 2 * n
    m = [[0] * size for _ in range(size)]
    for row in range(n):
        for k in range(n + 1):
            m[row][row + k] = pc[n - k]
    for row in range(n):
        for k in range(n + 1):
            m[n + row][row + k] = qc[n - k]
    # Bareiss
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[size - 1][size - 1]
