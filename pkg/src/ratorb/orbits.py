"""Exact arithmetic orbit scanning over Q.

Orbit values are tracked as coprime projective integer pairs: evaluating the
homogenized coefficient forms of A and stripping only the primes of their
resultant keeps the pair exactly reduced without full-size gcds (any common
prime of the evaluated forms divides the resultant). Membership in U(P^1(Q))
is decided exactly: m-th-power tests for monomial U, divisor enumeration for
small coefficients, and mod-p no-root certificates plus Hensel lifting with
rational reconstruction for moderate heights. Nothing is ever reported from
a filter alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapacityError, FieldMismatchError, PrecisionError
from .parse import format_ratfunc
from .poly import form_resultant_int
from .ratfunc import INF, ProjPoint, RatFunc, evaluate

try:
    from gmpy2 import mpz, isqrt, iroot, gcd as _int_gcd

    def _to_int(x):
        return mpz(x)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from math import gcd as _int_gcd, isqrt

    def _to_int(x):
        return int(x)

    def iroot(x, n):
        if x < 0:
            raise ValueError
        r = round(x ** (1.0 / n)) if x.bit_length() < 900 else None
        if r is None:
            lo, hi = 0, 1 << (x.bit_length() // n + 2)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid**n <= x:
                    lo = mid
                else:
                    hi = mid - 1
            r = lo
        else:
            while r**n > x:
                r -= 1
            while (r + 1) ** n <= x:
                r += 1
        return r, r**n == x


DEFAULT_HEIGHT_CAP_BITS = 1 << 26
DEFAULT_N_CAP = 10_000
_SMALL_COEFF_BITS = 48
_HENSEL_BITS = 100_000
_FILTER_PRIMES = (10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079,
                  10091, 10093, 10099, 10103, 10111, 10133, 10139, 10141)


# -- integer utilities -----------------------------------------------------------------


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = int(_int_gcd(abs(x - y), n))
        if d != n:
            return d
    raise PrecisionError(f"could not factor {n}")


def _factorize(n: int) -> dict[int, int]:
    n = abs(int(n))
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.extend([d, m // d])
    return out


def _divisors(n: int, cap: int = 20000) -> list[int] | None:
    ds = [1]
    for p, e in _factorize(n).items():
        new = []
        pe = 1
        for _ in range(e + 1):
            new.extend(d * pe for d in ds)
            pe *= p
            if len(new) > cap:
                return None
        ds = new
    return ds


# -- homogenized integer maps ---------------------------------------------------------


def _integer_coeff_lists(f: RatFunc) -> tuple[list[int], list[int], int]:
    """Joint integer coefficient lists of num and den, padded to degree n."""
    n = f.degree
    scale = 1
    for c in list(f.num.coeffs) + list(f.den.coeffs):
        if not c.is_rational():
            raise FieldMismatchError("orbit scanning needs maps over Q")
        scale = scale * c.a.denominator // _int_gcd(scale, c.a.denominator)
    num = [int(f.num[i].a * scale) for i in range(n + 1)]
    den = [int(f.den[i].a * scale) for i in range(n + 1)]
    from math import gcd as g0

    content = 0
    for c in num + den:
        content = g0(content, abs(c))
    if content > 1:
        num = [c // content for c in num]
        den = [c // content for c in den]
    return num, den, n


class _IntForms:
    """Homogeneous integer forms of a map over Q with resultant-prime
    reduction: step() keeps (p, q) exactly coprime."""

    def __init__(self, f: RatFunc):
        num, den, n = _integer_coeff_lists(f)
        self.n = n
        self.num = [_to_int(c) for c in num]
        self.den = [_to_int(c) for c in den]
        res = form_resultant_int(num, den, n)
        if res == 0:
            raise ValueError("degenerate form pair")
        self.res_primes = [_to_int(p) for p in _factorize(res)]

    def eval_forms(self, p, q):
        pw_p = [_to_int(1)]
        pw_q = [_to_int(1)]
        for _ in range(self.n):
            pw_p.append(pw_p[-1] * p)
            pw_q.append(pw_q[-1] * q)
        a = _to_int(0)
        b = _to_int(0)
        for i in range(self.n + 1):
            m = pw_p[i] * pw_q[self.n - i]
            if self.num[i]:
                a += self.num[i] * m
            if self.den[i]:
                b += self.den[i] * m
        return a, b

    def step(self, p, q):
        a, b = self.eval_forms(p, q)
        for ell in self.res_primes:
            while a % ell == 0 and b % ell == 0:
                a //= ell
                b //= ell
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        if b == 0:
            a = _to_int(1)
        return a, b


# -- exact membership / rational preimages ----------------------------------------------


@dataclass
class PreimageQuery:
    """Rational solutions y of U(y) = c, with infinity when applicable."""

    U: RatFunc
    target: ProjPoint
    solutions: list[ProjPoint]

    def to_json(self) -> dict:
        return {"target": str(self.target),
                "solutions": [str(s) for s in self.solutions]}


def _value_at_inf_pair(num: list[int], den: list[int], n: int) -> tuple[int, int]:
    """U(infinity) as an integer pair (a, b) meaning a/b (b = 0 for infinity)."""
    i = n
    while i >= 0 and num[i] == 0 and den[i] == 0:
        i -= 1
    return num[i], den[i]


def _monomial_shape(num: list[int], den: list[int]) -> tuple[int, int, int] | None:
    """(m, c_num, c_den) when U = (c_num/c_den) z^m (m may be negative)."""
    nz_num = [i for i, c in enumerate(num) if c]
    nz_den = [i for i, c in enumerate(den) if c]
    if len(nz_num) != 1 or len(nz_den) != 1:
        return None
    a, b = nz_num[0], nz_den[0]
    return a - b, num[a], den[b]


def _power_residue_filter(s_num, s_den, m: int) -> bool:
    """False only when s_num/s_den is certainly not an m-th power in Q."""
    for ell in _FILTER_PRIMES:
        a = int(s_num % ell)
        b = int(s_den % ell)
        if a == 0 or b == 0:
            continue
        g = pow(b, ell - 2, ell)
        t = a * g % ell
        k = (ell - 1) // _int_gcd(m, ell - 1)
        if pow(t, k, ell) != 1:
            return False
    return True


def _mth_roots(s_num, s_den, m: int) -> list[tuple[int, int]]:
    """All rational y with y^m = s_num/s_den (pair need not be reduced)."""
    if s_den == 0:
        return []
    if s_num == 0:
        return [(_to_int(0), _to_int(1))]
    sign = 1 if (s_num > 0) == (s_den > 0) else -1
    if sign < 0 and m % 2 == 0:
        return []
    if not _power_residue_filter(abs(s_num), abs(s_den), m):
        return []
    t_target = abs(s_num) * abs(s_den) ** (m - 1)
    t, exact = iroot(t_target, m)
    if not exact:
        return []
    v = abs(s_den)
    # y = sign_root * t / v with y^m = s: verify by construction of t
    if m % 2 == 1:
        return [(sign * t, v)]
    return [(t, v), (-t, v)]


def _poly_eval_pair(coeffs: list, u, v) -> int:
    """Evaluate sum coeffs[i] u^i v^(d-i) (the homogenized value at u/v)."""
    d = len(coeffs) - 1
    acc = _to_int(0)
    pu = _to_int(1)
    pv = [_to_int(1)]
    for _ in range(d):
        pv.append(pv[-1] * v)
    for i, c in enumerate(coeffs):
        if c:
            acc += c * pu * pv[d - i]
        pu = pu * u
    return acc


def _rational_roots_small(g: list) -> list[tuple[int, int]]:
    """Complete rational roots by divisor enumeration (small coefficients)."""
    low = 0
    while low < len(g) and g[low] == 0:
        low += 1
    roots = []
    if low > 0:
        roots.append((_to_int(0), _to_int(1)))
        g = g[low:]
    if len(g) <= 1:
        return roots
    d0 = _divisors(int(g[0]))
    dl = _divisors(int(g[-1]))
    if d0 is None or dl is None:
        raise PrecisionError("divisor enumeration too large")
    seen = set()
    for u in d0:
        for v in dl:
            if _int_gcd(u, v) != 1:
                continue
            for su in (u, -u):
                key = (su, v)
                if key in seen:
                    continue
                seen.add(key)
                if _poly_eval_pair(g, _to_int(su), _to_int(v)) == 0:
                    roots.append((_to_int(su), _to_int(v)))
    return roots


def _squarefree_int_poly(g: list[int]) -> list[int]:
    """Square-free part of an integer polynomial, primitive."""
    from .poly import Poly, squarefree_part

    p = Poly([Fraction(int(c)) for c in g])
    sf = squarefree_part(p)
    den_lcm = 1
    for c in sf.coeffs:
        den_lcm = den_lcm * c.a.denominator // _int_gcd(den_lcm, c.a.denominator)
    out = [int(c.a * den_lcm) for c in sf.coeffs]
    from math import gcd as g0

    content = 0
    for c in out:
        content = g0(content, abs(c))
    return [c // max(content, 1) for c in out]


def _rational_roots_hensel(g: list) -> list[tuple[int, int]]:
    """Complete rational roots via mod-p certificates and Hensel lifting with
    rational reconstruction; exact for coefficient sizes up to the Hensel
    threshold, and an exact *absence* certificate at any size."""
    low = 0
    while low < len(g) and g[low] == 0:
        low += 1
    roots = []
    if low > 0:
        roots.append((_to_int(0), _to_int(1)))
        g = g[low:]
    if len(g) <= 1:
        return roots
    gsf = [_to_int(c) for c in _squarefree_int_poly([int(c) for c in g])]
    deg = len(gsf) - 1
    bits = max(int(c).bit_length() for c in gsf)

    gder = [gsf[i] * i for i in range(1, len(gsf))]
    tried = 0
    for ell in (32003, 32009, 32027, 32029, 32051, 32057, 32059, 32063):
        if gsf[-1] % ell == 0:
            continue
        residues = [r for r in range(ell)
                    if _poly_eval_pair([c % ell for c in gsf], r, 1) % ell == 0]
        if not residues:
            return roots  # exact non-existence certificate
        tried += 1
        if bits > _HENSEL_BITS:
            continue
        good = all(_poly_eval_pair([c % ell for c in gder], r, 1) % ell != 0
                   for r in residues)
        if not good:
            continue
        # Hensel-lift every residue to modulus > 2 |g_0 g_d|, then reconstruct
        bound = 2 * abs(gsf[0] * gsf[-1]) + 1
        modulus = _to_int(ell)
        lifts = [_to_int(r) for r in residues]
        while modulus <= bound:
            modulus = modulus * modulus
            new = []
            for r in lifts:
                fr = _poly_eval_pair([c % modulus for c in gsf], r, 1) % modulus
                dr = _poly_eval_pair([c % modulus for c in gder], r, 1) % modulus
                inv = pow(int(dr), -1, int(modulus))
                new.append((r - fr * inv) % modulus)
            lifts = new
        for r in lifts:
            rec = _rational_reconstruct(int(r), int(modulus),
                                        abs(int(gsf[0])), abs(int(gsf[-1])))
            if rec is None:
                continue
            u, v = rec
            if _poly_eval_pair(gsf, _to_int(u), _to_int(v)) == 0:
                if not any(u * q == p * v for p, q in roots):
                    roots.append((_to_int(u), _to_int(v)))
        return roots
    if tried == 0:
        raise PrecisionError("no usable prime for root certificates")
    raise PrecisionError("membership unresolved at this height")


def _rational_reconstruct(r: int, m: int, num_bound: int, den_bound: int
                          ) -> tuple[int, int] | None:
    """u/v with u = r v mod m, |u| <= num_bound, 0 < v <= den_bound."""
    r0, r1 = m, r % m
    s0, s1 = 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        if abs(s1) > den_bound:
            return None
    if r1 == 0:
        return None
    v = s1
    u = r1
    if v < 0:
        u, v = -u, -v
    if v == 0 or _int_gcd(abs(u), v) != 1:
        return None
    return int(u), int(v)


def _preimage_pairs(num: list, den: list, n: int, a, b) -> list[tuple]:
    """Rational preimage pairs (u, v) of the value a/b under the integer
    forms (finite solutions only)."""
    mono = _monomial_shape([int(c) for c in num], [int(c) for c in den])
    if mono is not None:
        m, cn, cd = mono
        if m == 0:
            return []
        if m > 0:
            s_num, s_den = a * cd, b * cn
        else:
            s_num, s_den = b * cn, a * cd
            m = -m
        return _mth_roots(_to_int(s_num), _to_int(s_den), m)
    g = [b * num[i] - a * den[i] for i in range(n + 1)]
    while g and g[-1] == 0:
        g.pop()
    if not g:
        return []
    bits = max(int(c).bit_length() for c in g)
    if bits <= _SMALL_COEFF_BITS:
        try:
            return _rational_roots_small(g)
        except PrecisionError:
            pass
    return _rational_roots_hensel(g)


def rational_preimages(U: RatFunc, c: ProjPoint | int | Fraction) -> PreimageQuery:
    """All rational points y with U(y) = c, exactly."""
    if not isinstance(c, ProjPoint):
        c = ProjPoint(c)
    num, den, n = _integer_coeff_lists(U)
    numz = [_to_int(x) for x in num]
    denz = [_to_int(x) for x in den]
    if c.is_infinity:
        a, b = _to_int(1), _to_int(0)
    else:
        fr = c.value.as_fraction()
        a, b = _to_int(fr.numerator), _to_int(fr.denominator)
    sols = []
    for u, v in _preimage_pairs(numz, denz, n, a, b):
        sols.append(ProjPoint(Fraction(int(u), int(v))))
    ia, ib = _value_at_inf_pair(num, den, n)
    if (b == 0 and ib == 0) or (b != 0 and ib != 0 and a * ib == int(ia) * b):
        sols.append(INF)
    sols.sort(key=lambda p: (p.is_infinity, str(p)))
    return PreimageQuery(U=U, target=c, solutions=sols)


# -- orbit scanning -------------------------------------------------------------------


@dataclass
class ProgressionFit:
    """Union-of-progressions description of a membership window."""

    status: str                      # exact-on-window | inconclusive
    preperiod: int | None = None
    period: int | None = None
    classes: list[int] = field(default_factory=list)   # progression starts a (step = period)
    singletons: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status, "preperiod": self.preperiod,
                "period": self.period, "classes": self.classes,
                "singletons": self.singletons}

    def regenerate(self, upto: int) -> list[bool]:
        bits = [False] * (upto + 1)
        for s in self.singletons:
            if s <= upto:
                bits[s] = True
        for a in self.classes:
            k = a
            while k <= upto:
                bits[k] = True
                k += self.period
        return bits


def progression_fit(membership: list[bool]) -> ProgressionFit:
    """Smallest period R <= N/3 and preperiod s making the window R-periodic
    on [s, N]; progressions are extended backward maximally and leftover
    members become singletons."""
    n_max = len(membership) - 1
    for R in range(1, max(1, n_max // 3) + 1):
        bad = [n for n in range(0, n_max - R + 1)
               if membership[n] != membership[n + R]]
        s = 0 if not bad else bad[-1] + 1
        if s > n_max - 2 * R:
            continue
        classes = []
        covered = set()
        for r in range(R):
            pos = [n for n in range(s, n_max + 1) if n % R == r % R]
            if not pos or not all(membership[n] for n in pos):
                continue
            a = min(pos)
            while a - R >= 0 and membership[a - R]:
                a -= R
            classes.append(a)
            covered.update(range(a, n_max + 1, R))
        singletons = [n for n in range(n_max + 1)
                      if membership[n] and n not in covered]
        return ProgressionFit(status="exact-on-window", preperiod=s, period=R,
                              classes=sorted(classes), singletons=singletons)
    return ProgressionFit(status="inconclusive")


@dataclass
class OrbitReport:
    """Membership pattern of the orbit of x0 under A in U(P^1(Q))."""

    A: RatFunc
    U: RatFunc
    x0: ProjPoint
    requested_n: int
    horizon: int
    membership: list[bool]
    witnesses: list
    values: list
    fit: ProgressionFit
    status: str                      # complete | height-capped
    cycle: tuple[int, int] | None = None

    def members(self) -> list[int]:
        return [n for n, m in enumerate(self.membership) if m]

    def to_json(self) -> dict:
        return {
            "A": format_ratfunc(self.A),
            "U": format_ratfunc(self.U),
            "x0": str(self.x0),
            "requested_n": self.requested_n,
            "horizon": self.horizon,
            "status": self.status,
            "membership": [int(b) for b in self.membership],
            "members": self.members(),
            "values": [_big_str(v) for v in self.values],
            "witnesses": [None if w is None else _big_str(w) for w in self.witnesses],
            "fit": self.fit.to_json(),
            "cycle": list(self.cycle) if self.cycle else None,
        }


def _digit_count(x) -> int:
    x = abs(int(x))
    if x == 0:
        return 1
    try:
        return mpz(x).num_digits(10)
    except NameError:
        return int(x.bit_length() * 0.30102999566398) + 1


def _big_str(v, limit_digits: int = 4000):
    """Decimal string, or a digest stub for huge values (the stub hashes the
    two's-complement bytes, so no giant base-10 conversion ever happens)."""
    if v is None:
        return None
    if isinstance(v, tuple):
        p, q = v
        if q == 0:
            return "inf"
        pi, qi = int(p), int(q)
        if pi.bit_length() + qi.bit_length() > int(limit_digits * 3.32):
            h = hashlib.sha256(
                pi.to_bytes((pi.bit_length() + 15) // 8, "big", signed=True)
                + b"/" + qi.to_bytes((qi.bit_length() + 15) // 8, "big", signed=True)
            ).hexdigest()
            return {"digits_num": _digit_count(pi), "digits_den": _digit_count(qi),
                    "sha256": h}
        return f"{pi}" if qi == 1 else f"{pi}/{qi}"
    return str(v)


def orbit_scan(A: RatFunc, U: RatFunc, x0: ProjPoint | int | Fraction, N: int,
               height_cap_bits: int = DEFAULT_HEIGHT_CAP_BITS) -> OrbitReport:
    """Exact membership scan of A^(o n)(x0) in U(P^1(Q)) for n = 0..N."""
    if not isinstance(x0, ProjPoint):
        x0 = ProjPoint(x0)
    if N > DEFAULT_N_CAP:
        raise CapacityError(f"N = {N} exceeds the scan cap {DEFAULT_N_CAP}")
    forms = _IntForms(A)
    u_num, u_den, u_n = _integer_coeff_lists(U)
    u_numz = [_to_int(c) for c in u_num]
    u_denz = [_to_int(c) for c in u_den]
    inf_pair = _value_at_inf_pair(u_num, u_den, u_n)

    if x0.is_infinity:
        p, q = _to_int(1), _to_int(0)
    else:
        fr = x0.value.as_fraction()
        p, q = _to_int(fr.numerator), _to_int(fr.denominator)
        g = _int_gcd(abs(p), q)
        if g > 1:
            p, q = p // g, q // g

    membership: list[bool] = []
    witnesses: list = []
    values: list = []
    seen: dict[tuple, int] = {}
    cycle = None
    status = "complete"
    horizon = N

    def member_of(pp, qq):
        if qq == 0:
            if inf_pair[1] == 0:
                return True, (_to_int(1), _to_int(0))
            pre = _preimage_pairs(u_numz, u_denz, u_n, _to_int(1), _to_int(0))
            if pre:
                return True, pre[0]
            return False, None
        pre = _preimage_pairs(u_numz, u_denz, u_n, pp, qq)
        if pre:
            best = min(pre, key=lambda t: (int(t[1]), abs(int(t[0])), int(t[0]) < 0))
            return True, best
        ia, ib = inf_pair
        if ib != 0 and pp * ib == ia * qq:
            return True, (_to_int(1), _to_int(0))
        return False, None

    n = 0
    while n <= N:
        bits = max(int(p).bit_length(), int(q).bit_length())
        if bits > height_cap_bits:
            status = "height-capped"
            horizon = n - 1
            break
        if bits <= 4096:
            key = (int(p), int(q))
            if key in seen and cycle is None:
                cycle = (seen[key], n)
                # replay the cycle pattern for the rest of the window
                start, period = cycle[0], n - seen[key]
                while n <= N:
                    idx = start + (n - start) % period
                    membership.append(membership[idx])
                    witnesses.append(witnesses[idx])
                    values.append(values[idx])
                    n += 1
                break
            seen[key] = n
        ok, wit = member_of(p, q)
        membership.append(ok)
        witnesses.append(wit)
        values.append((p, q))
        p, q = forms.step(p, q)
        n += 1

    fit = progression_fit(membership) if membership else ProgressionFit(status="inconclusive")
    return OrbitReport(A=A, U=U, x0=x0, requested_n=N, horizon=horizon,
                       membership=membership, witnesses=witnesses, values=values,
                       fit=fit, status=status, cycle=cycle)
