"""Expression grammar for rational functions, and the canonical printer.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' nat)?
    atom   := nat | 'z' | '(' expr ')' | 'sqrt' '(' int ')'
            | 'T' '(' nat ')' | 'Z' '(' nat ')' | 'D' '(' nat ')'

The printer emits the canonical reduced form (monic denominator); parse after
print is the identity on reduced functions.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .poly import Poly
from .ratfunc import RatFunc, chebyshev, dfunc, power
from .scalar import Scalar

_TOKEN_CHARS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word in ("z", "sqrt", "T", "Z", "D"):
                tokens.append((word, word, i))
                i = j
                continue
            raise ParseError(f"unknown name '{word}'", i)
        raise ParseError(f"unexpected character '{ch}'", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> RatFunc:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2])
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, at = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.num.is_zero():
                    raise ParseError("division by zero", at)
                value = value / rhs
        return value

    def unary(self) -> RatFunc:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, at = self.take()
            tok = self.take("int")
            if tok[1] < 0:
                raise ParseError("exponent must be a nonnegative integer", at)
            base = base**tok[1]
        return base

    def atom(self) -> RatFunc:
        kind, value, at = self.take()
        if kind == "int":
            return RatFunc.const(value)
        if kind == "z":
            return RatFunc.identity()
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "sqrt":
            self.take("(")
            neg = False
            if self.peek()[0] == "-":
                self.take()
                neg = True
            arg = self.take("int")[1]
            self.take(")")
            return RatFunc.const(Scalar.sqrt_int(-arg if neg else arg))
        if kind in ("T", "Z", "D"):
            self.take("(")
            ntok = self.take("int")
            self.take(")")
            if ntok[1] < 1:
                raise ParseError(f"{kind}(n) needs n >= 1", ntok[2])
            return {"T": chebyshev, "Z": power, "D": dfunc}[kind](ntok[1])
        raise ParseError(f"unexpected {kind!r}", at)


def parse(text: str) -> RatFunc:
    """Parse an expression into a reduced RatFunc.

    >>> parse("(z+1)^2").num.degree
    2
    """
    return _Parser(text).parse()


def parse_point(text: str):
    """Parse a point of P^1: an expression without z, or 'inf'."""
    from .ratfunc import INF, ProjPoint

    if text.strip() in ("inf", "oo", "infinity"):
        return INF
    f = parse(text)
    if f.degree != 0:
        raise ParseError("expected a constant expression")
    return ProjPoint(f.num.constant() / f.den.constant())


# -- printing ----------------------------------------------------------------


def _format_fraction(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical scalar string: 'p/q', 'p/q*sqrt(d)', or 'a+b*sqrt(d)'."""
    if s.b == 0:
        return _format_fraction(s.a)
    root = f"sqrt({s.d})" if s.d > 0 else f"sqrt(-{-s.d})"
    if abs(s.b) == 1:
        rad = root if s.b > 0 else f"-{root}"
    else:
        rad = f"{_format_fraction(s.b)}*{root}"
    if s.a == 0:
        return rad
    joiner = "+" if s.b > 0 else ""
    return f"{_format_fraction(s.a)}{joiner}{rad}"


def _term_parts(c: Scalar, k: int) -> tuple[bool, str]:
    """(negative, body) for coefficient c at degree k."""
    mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
    if c.b == 0:
        neg = c.a < 0
        mag = abs(c.a)
        if k == 0:
            return neg, _format_fraction(mag)
        if mag == 1:
            return neg, mono
        return neg, f"{_format_fraction(mag)}*{mono}"
    if c.a == 0:
        neg = c.b < 0
        body = format_scalar(Scalar(0, abs(c.b), c.d))
        return neg, body if k == 0 else f"{body}*{mono}"
    body = f"({format_scalar(c)})"
    return False, body if k == 0 else f"{body}*{mono}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c.is_zero():
            continue
        neg, body = _term_parts(c, k)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("-" if neg else "+") + body)
    return "".join(pieces)


def _poly_term_count(p: Poly) -> int:
    return sum(1 for c in p.coeffs if not c.is_zero())


def format_ratfunc(f: RatFunc) -> str:
    num_str = format_poly(f.num)
    if f.den == Poly.const(1):
        return num_str
    if _poly_term_count(f.num) > 1:
        num_str = f"({num_str})"
    return f"{num_str}/({format_poly(f.den)})"
