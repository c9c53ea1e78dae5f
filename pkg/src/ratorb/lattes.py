"""Classification of special maps and detection of generalized Lattes maps.

A map A is special when it is conjugate to z^(+-n) or +-T_n, or is a Lattes
map (covering self-map of some Euler-characteristic-0 orbifold). A is a
generalized Lattes map when some orbifold O distinct from the unmarked sphere
makes A: O -> O minimal holomorphic, i.e.

    nu(A(z)) = nu(z) * gcd(deg_z A, nu(A(z)))          for all z.      (*)

For non-special A the admissible orbifolds have a unique maximal element O_0
under divisibility of marks; the search below enumerates candidate singular
supports inside the critical-value set of A^(o 3) (complete for chi >= 0 by
the degree-five support lemma applied to the cube) and solves the divisor
conditions of (*) pattern by pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .errors import BudgetError, PreconditionError
from .numeric import CriticalDatum, critical_data, run_ladder
from .orbifold import MapKind, Orbifold, classify_map, fiber_of, image_point, preceq
from .points import AlgebraicPoint, dedup_points, find_point
from .ratfunc import Mobius, ProjPoint, RatFunc, chebyshev, compose, conjugate, evaluate, iterate, power
from .scalar import Scalar

CHI_ZERO_SIGNATURES = ((2, 2, 2, 2), (3, 3, 3), (2, 4, 4), (2, 3, 6))
PLATONIC_SIGNATURES = ((2, 3, 3), (2, 3, 4), (2, 3, 5))
DEFAULT_SEARCH_BOUND = 16


@dataclass
class SpecialClass:
    """Conjugacy-class tag: power / chebyshev / lattes / generalized_lattes /
    not_special, with the witness data that applies."""

    kind: str
    n: int | None = None          # signed exponent (power) or degree (chebyshev)
    sign: int | None = None       # +1 for T_n, -1 for -T_n
    mobius: Mobius | None = None  # in-field conjugating witness when it exists
    orbifold: Orbifold | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.sign is not None:
            out["sign"] = self.sign
        if self.mobius is not None:
            out["mobius"] = str(self.mobius.as_ratfunc())
        if self.orbifold is not None:
            out["orbifold"] = self.orbifold.to_json()
        return out


@dataclass
class LattesReport:
    """Outcome of the generalized-Lattes search."""

    klass: SpecialClass
    orbifolds: list[Orbifold] = field(default_factory=list)
    maximal: Orbifold | None = None
    unbounded_family: bool = False
    warning: str | None = None

    def to_json(self) -> dict:
        return {
            "class": self.klass.to_json(),
            "orbifolds": [o.to_json() for o in self.orbifolds],
            "maximal": self.maximal.to_json() if self.maximal is not None else None,
            "unbounded_family": self.unbounded_family,
            "warning": self.warning,
        }


# -- exact root extraction for conjugation witnesses -------------------------------


def _nth_root_fraction(fr: Fraction, m: int) -> Fraction | None:
    if m <= 0:
        return None
    if fr == 0:
        return Fraction(0)
    neg = fr < 0
    if neg and m % 2 == 0:
        return None
    fr = abs(fr)
    num = round(fr.numerator ** (1.0 / m))
    den = round(fr.denominator ** (1.0 / m))
    for dn in (num - 1, num, num + 1):
        for dd in (den - 1, den, den + 1):
            if dn > 0 and dd > 0 and Fraction(dn**m, dd**m) == fr:
                r = Fraction(dn, dd)
                return -r if neg else r
    return None


def _nth_root_scalar(c: Scalar, m: int) -> Scalar | None:
    """Some solution x of x^m = c inside a quadratic extension of Q, or None."""
    if not c.is_rational():
        if m % 2 == 0:
            return None
        # try x rational-in-field forms only when c itself is a perfect power
        return None
    s = c.as_fraction()
    r = _nth_root_fraction(s, m)
    if r is not None:
        return Scalar(r)
    if m % 2 == 0:
        # x = sqrt(r) with r^(m/2) = s
        r2 = _nth_root_fraction(s, m // 2)
        if r2 is not None and r2 > 0:
            return Scalar.sqrt_int(r2.numerator * r2.denominator) / Scalar(r2.denominator)
    return None


def _mobius_to_zero_inf(a: ProjPoint, b: ProjPoint) -> Mobius:
    """A Mobius map sending a -> 0 and b -> infinity."""
    if a.is_infinity:
        return Mobius(0, 1, 1, -b.value)
    if b.is_infinity:
        return Mobius(1, -a.value, 0, 1)
    return Mobius(1, -a.value, 1, -b.value)


# -- power / chebyshev detection ------------------------------------------------------


def _totally_ramified(crit: list[CriticalDatum], deg: int) -> list[CriticalDatum]:
    return [d for d in crit if d.local_degree == deg]


def _detect_power(A: RatFunc, crit: list[CriticalDatum]) -> SpecialClass | None:
    deg = A.degree
    tot = _totally_ramified(crit, deg)
    if len(tot) != 2:
        return None
    pa, pb = tot[0].point, tot[1].point
    va, vb = tot[0].value, tot[1].value
    fixed = va.same_point(pa) and vb.same_point(pb)
    swapped = va.same_point(pb) and vb.same_point(pa)
    if not (fixed or swapped):
        return None
    n = deg if fixed else -deg
    mob = None
    if pa.exact is not None and pb.exact is not None:
        nu = _mobius_to_zero_inf(pa.exact, pb.exact)
        C = conjugate(A, nu)
        model = power(n)
        # C should be c * z^n or c / z^n; extract c and absorb it by scaling
        if C.num.degree == model.num.degree and C.den.degree == model.den.degree:
            c = (C.num.leading() / C.den.leading())
            lam = _nth_root_scalar(
                c.inverse() if n > 0 else c, (deg - 1) if n > 0 else (deg + 1))
            if lam is not None and not lam.is_zero():
                delta = Mobius(lam, 0, 0, 1)
                mu = nu.inverse().compose_mobius(delta)
                if conjugate(model, mu) == A:
                    mob = mu
    return SpecialClass(kind="power", n=n, mobius=mob)


def _detect_chebyshev(A: RatFunc, crit: list[CriticalDatum]) -> SpecialClass | None:
    deg = A.degree
    tot = _totally_ramified(crit, deg)
    # a fixed totally ramified point plays the role of infinity
    anchors = [d for d in tot if d.value.same_point(d.point)]
    values = dedup_points([d.value for d in crit])
    for anchor in anchors:
        c = anchor.point
        if c.exact is None:
            continue
        others = [v for v in values if not v.same_point(c)]
        if len(others) == 2:
            cand_pairs = [(others[0], others[1]), (others[1], others[0])]
        elif len(others) == 1:
            a = others[0]
            b = image_point(A, a)
            if b.same_point(a) or b.same_point(c):
                continue
            cand_pairs = [(a, b), (b, a)]
        else:
            continue
        for pa, pb in cand_pairs:
            if pa.exact is None or pb.exact is None:
                continue
            try:
                nu = Mobius.through([pa.exact, pb.exact, c.exact],
                                    [ProjPoint(-1), ProjPoint(1), ProjPoint(None)])
            except Exception:
                continue
            B = conjugate(A, nu)
            t = chebyshev(deg)
            if B == t:
                return SpecialClass(kind="chebyshev", n=deg, sign=1, mobius=nu.inverse())
            if B == -t:
                return SpecialClass(kind="chebyshev", n=deg, sign=-1, mobius=nu.inverse())
    return None


# -- admissible-orbifold search --------------------------------------------------------


class _SearchData:
    """Candidate support pool (critical values of A^(o 3)) with the A-action,
    local degrees, and fibers resolved against the pool."""

    def __init__(self, A: RatFunc, crit: list[CriticalDatum], prec: int = 128):
        self.A = A
        self.crit = crit
        pool = dedup_points([d.value for d in crit])
        for _ in range(2):
            images = [image_point(A, p, prec) for p in pool]
            for q in images:
                if find_point(q, pool) is None:
                    pool.append(q)
        self.pool = pool
        self.img = [find_point(image_point(A, p, prec), self.pool) for p in self.pool]
        self.deg_at = []
        for p in self.pool:
            e = 1
            for d in crit:
                if d.point.same_point(p):
                    e = d.local_degree
                    break
            self.deg_at.append(e)
        self._fibers: dict[int, list[tuple[int | None, int]]] = {}
        self.prec = prec

    def fiber(self, i: int) -> list[tuple[int | None, int]]:
        """Fiber over pool[i] as (pool index or None, local degree) pairs."""
        if i not in self._fibers:
            out = []
            for z, e in fiber_of(self.A, self.pool[i], self.crit, self.prec):
                out.append((find_point(z, self.pool), e))
            self._fibers[i] = out
        return self._fibers[i]


def _check_assignment(data: _SearchData, support: tuple[int, ...],
                      nus: dict[int, int], covering: bool) -> bool:
    """Check condition (*) (or the covering version) for marks nus on support."""
    sset = set(support)
    for i in support:
        j = data.img[i]
        if j is None or j not in sset:
            return False
        e = data.deg_at[i]
        nu_i, nu_j = nus[i], nus[j]
        if covering:
            if nu_j != nu_i * e:
                return False
        elif nu_j != nu_i * math.gcd(e, nu_j):
            return False
    for w in support:
        nu_w = nus[w]
        for z_idx, e in data.fiber(w):
            if z_idx in sset:
                continue  # coupled condition already checked above
            if covering:
                if nu_w != e:
                    return False
            elif e % nu_w != 0:
                # (*) at an unmarked preimage z reads nu_w = gcd(e, nu_w)
                return False
    if covering:
        # a covering self-map sends every critical value into the support
        for d in data.crit:
            k = find_point(d.value, data.pool)
            if k is None or k not in sset:
                return False
    return True


def _orbifold_from(data: _SearchData, nus: dict[int, int]) -> Orbifold:
    return Orbifold([(data.pool[i], nu) for i, nu in nus.items()])


def _search_admissible(data: _SearchData, n_cap: int, covering: bool = False
                       ) -> tuple[list[Orbifold], bool]:
    """All admissible orbifolds with supports in the candidate pool and
    signatures from the finite lists plus the {n,n} / {2,2,n} families
    (n enumerated up to n_cap); returns (orbifolds, hit_cap)."""
    found: list[Orbifold] = []
    hit_cap = False

    def add(nus: dict[int, int]):
        o = _orbifold_from(data, nus)
        if not any(o.same_orbifold(p) for p in found):
            found.append(o)

    idxs = range(len(data.pool))
    for size in (2, 3, 4):
        for support in combinations(idxs, size):
            if not all(data.img[i] in support for i in support):
                continue
            if size == 2:
                p, q = support
                for n in range(2, n_cap + 1):
                    if _check_assignment(data, support, {p: n, q: n}, covering):
                        add({p: n, q: n})
                        if n == n_cap:
                            hit_cap = True
            elif size == 3:
                if not covering:
                    for n_pos in support:
                        others = [i for i in support if i != n_pos]
                        for n in range(2, n_cap + 1):
                            nus = {others[0]: 2, others[1]: 2, n_pos: n}
                            if _check_assignment(data, support, nus, covering):
                                add(nus)
                                if n == n_cap:
                                    hit_cap = True
                    sig_pool = PLATONIC_SIGNATURES + ((3, 3, 3), (2, 4, 4), (2, 3, 6))
                else:
                    sig_pool = ((3, 3, 3), (2, 4, 4), (2, 3, 6))
                for sig in sig_pool:
                    for perm in set(permutations(sig)):
                        nus = dict(zip(support, perm))
                        if _check_assignment(data, support, nus, covering):
                            add(nus)
            else:
                nus = {i: 2 for i in support}
                if _check_assignment(data, support, nus, covering):
                    add(nus)
    return found, hit_cap


# -- public operations ------------------------------------------------------------------


def classify_special(A: RatFunc, prec: int = 128) -> SpecialClass:
    """Detect conjugacy to z^(+-n) or +-T_n, or an ordinary Lattes map."""
    if A.degree < 2:
        raise ValueError("classify_special needs deg A >= 2")
    crit = critical_data(A, prec)
    res = _detect_power(A, crit)
    if res is not None:
        return res
    res = _detect_chebyshev(A, crit)
    if res is not None:
        return res
    data = _SearchData(A, crit, prec)
    covers, _ = _search_admissible(data, n_cap=4, covering=True)
    covers = [o for o in covers if o.euler_char() == 0]
    if covers:
        return SpecialClass(kind="lattes", orbifold=covers[0])
    return SpecialClass(kind="not_special")


def detect_generalized_lattes(A: RatFunc, search_bound: int = DEFAULT_SEARCH_BOUND,
                              prec: int = 128) -> LattesReport:
    """Enumerate orbifolds making A a minimal holomorphic self-map and find
    the divisibility-maximal one; special maps get a capped enumeration."""
    if A.degree < 2:
        raise ValueError("detection needs deg A >= 2")
    special = classify_special(A, prec)
    crit = critical_data(A, prec)
    data = _SearchData(A, crit, prec)
    n_cap = max(search_bound, 2 * A.degree)
    orbifolds, hit_cap = _search_admissible(data, n_cap=n_cap, covering=False)
    # re-verify every candidate independently through the orbifold module
    verified = []
    for o in orbifolds:
        if classify_map(A, o, o, crit, prec) >= MapKind.MinimalHolomorphic:
            verified.append(o)
    orbifolds = verified

    if special.kind in ("power", "chebyshev"):
        return LattesReport(klass=special, orbifolds=orbifolds, maximal=None,
                            unbounded_family=hit_cap)

    maximal = None
    warning = None
    for o in orbifolds:
        if all(preceq(p, o) for p in orbifolds):
            maximal = o
            break
    if orbifolds and maximal is None:
        warning = "no divisibility-maximal orbifold among admissible ones"
    if hit_cap:
        warning = (warning + "; " if warning else "") + \
            "family enumeration hit the search bound for a non-special map"

    if special.kind == "lattes":
        klass = SpecialClass(kind="lattes", orbifold=special.orbifold)
    elif orbifolds:
        klass = SpecialClass(kind="generalized_lattes", orbifold=maximal)
    else:
        klass = SpecialClass(kind="not_special")
    return LattesReport(klass=klass, orbifolds=orbifolds, maximal=maximal,
                        unbounded_family=hit_cap, warning=warning)


def maximal_orbifold_consistency(A: RatFunc, l: int,
                                 search_bound: int = DEFAULT_SEARCH_BOUND) -> bool:
    """Check O_0 of A^(o l) equals O_0 of A (both absent counts as equal)."""
    if l < 1 or l > 3:
        raise PreconditionError("iterate consistency implemented for 1 <= l <= 3")
    rep_a = detect_generalized_lattes(A, search_bound)
    if rep_a.klass.kind in ("power", "chebyshev"):
        raise PreconditionError("consistency check requires a non-special map")
    rep_l = detect_generalized_lattes(iterate(A, l), search_bound)
    if rep_a.maximal is None and rep_l.maximal is None:
        return True
    if rep_a.maximal is None or rep_l.maximal is None:
        return False
    return rep_a.maximal.same_orbifold(rep_l.maximal)
