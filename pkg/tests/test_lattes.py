"""Special-map classification and the generalized Lattes search."""

import math

import pytest

from ratorb.errors import PreconditionError
from ratorb.lattes import (
    classify_special,
    detect_generalized_lattes,
    maximal_orbifold_consistency,
)
from ratorb.orbifold import MapKind, Orbifold, classify_map, transport
from ratorb.parse import parse
from ratorb.points import AlgebraicPoint
from ratorb.ratfunc import INF, Mobius, chebyshev, conjugate, power

A = parse("144*z*(z+3)/(z-9)^2")
ATILDE = parse("48*z/(4*z+3)^2")


def orb(*marks):
    return Orbifold([(AlgebraicPoint.from_exact(p), nu) for p, nu in marks])


# ---------------------------------------------------------------- classify_special


def test_classify_power():
    res = classify_special(parse("z^5"))
    assert res.kind == "power" and res.n == 5
    assert res.mobius is not None
    assert conjugate(power(5), res.mobius) == parse("z^5")


def test_classify_inverse_power():
    res = classify_special(parse("1/z^3"))
    assert res.kind == "power" and res.n == -3


def test_classify_chebyshev():
    res = classify_special(chebyshev(5))
    assert res.kind == "chebyshev" and res.n == 5 and res.sign == 1
    # -T_3 is not conjugate to T_3 (odd degree): sign must be -1
    res2 = classify_special(-chebyshev(3))
    assert res2.kind == "chebyshev" and res2.n == 3 and res2.sign == -1
    # -T_4 is conjugate to T_4 via -z (even degree): either sign with a valid witness
    res3 = classify_special(-chebyshev(4))
    assert res3.kind == "chebyshev" and res3.n == 4
    target = chebyshev(4) if res3.sign == 1 else -chebyshev(4)
    assert conjugate(target, res3.mobius) == -chebyshev(4)


def test_classify_power_conjugate():
    mu = Mobius.from_ratfunc(parse("(z+1)/(z-2)"))
    f = conjugate(parse("z^3"), mu)
    res = classify_special(f)
    assert res.kind == "power" and res.n == 3
    assert res.mobius is not None
    assert conjugate(power(3), res.mobius) == f


def test_classify_chebyshev_conjugate():
    mu = Mobius.from_ratfunc(parse("2*z-1"))
    f = conjugate(chebyshev(3), mu)
    res = classify_special(f)
    assert res.kind == "chebyshev" and res.n == 3
    assert conjugate(chebyshev(3).__neg__() if res.sign == -1 else chebyshev(3), res.mobius) == f


def test_classify_scaled_power():
    # 2 z^3 is conjugate to z^3 via lambda = 1/sqrt(2): witness over Q(sqrt 2)
    res = classify_special(parse("2*z^3"))
    assert res.kind == "power" and res.n == 3
    assert res.mobius is not None
    assert conjugate(power(3), res.mobius) == parse("2*z^3")


def test_classify_lattes_map():
    # doubling map on the curve y^2 = x^3 - x: covering self-map of {2,2,2,2}
    f = parse("(z^2+1)^2/(4*z*(z^2-1))")
    res = classify_special(f)
    assert res.kind == "lattes"
    assert res.orbifold is not None
    assert res.orbifold.signature() == (2, 2, 2, 2)
    assert res.orbifold.euler_char() == 0


def test_classify_generic_not_special():
    assert classify_special(parse("z^2+1")).kind == "not_special"
    assert classify_special(A).kind == "not_special"


# ---------------------------------------------------------------- paper examples


def test_detect_paper_map():
    rep = detect_generalized_lattes(A)
    assert rep.klass.kind == "generalized_lattes"
    assert rep.maximal is not None
    assert rep.maximal.same_orbifold(orb((0, 2), (-3, 2)))
    assert rep.warning is None


def test_detect_paper_conjugate():
    rep = detect_generalized_lattes(ATILDE)
    assert rep.maximal is not None
    assert rep.maximal.same_orbifold(orb((0, 2), (INF, 2)))


def test_detect_zr_rn_family():
    # z(z+1)^2 has the invariant pair {0, inf} with nu = 2
    rep = detect_generalized_lattes(parse("z*(z+1)^2"))
    assert rep.klass.kind == "generalized_lattes"
    assert rep.maximal.same_orbifold(orb((0, 2), (INF, 2)))


def test_detect_negative():
    rep = detect_generalized_lattes(parse("z^2+1"))
    assert rep.klass.kind == "not_special"
    assert rep.orbifolds == []
    assert rep.maximal is None


def test_detect_reverifies_via_classify_map():
    rep = detect_generalized_lattes(A)
    for o in rep.orbifolds:
        assert classify_map(A, o, o) >= MapKind.MinimalHolomorphic


# ---------------------------------------------------------------- special families


def test_power_family_enumeration():
    rep = detect_generalized_lattes(parse("z^5"), search_bound=12)
    assert rep.klass.kind == "power"
    assert rep.unbounded_family
    expected = sorted(n for n in range(2, 13) if math.gcd(5, n) == 1)
    got = sorted(o.marks[0][1] for o in rep.orbifolds)
    assert got == expected
    for o in rep.orbifolds:
        sig = o.signature()
        assert sig == (sig[0], sig[0])
        assert o.nu_at(AlgebraicPoint.from_exact(0)) == sig[0]
        assert o.nu_at(AlgebraicPoint.infinity()) == sig[0]


def test_chebyshev_family_enumeration():
    rep = detect_generalized_lattes(chebyshev(5), search_bound=8)
    assert rep.klass.kind == "chebyshev"
    cap = max(8, 2 * 5)  # effective enumeration bound
    # (dva): {2,2,n} at (-1, 1, inf) with gcd(5, n) = 1 (n = 1 appears as {2,2});
    # (tri)/(chet): {2,2} at {1, inf} and {-1, inf} (d odd)
    pm1 = orb((-1, 2), (1, 2))
    tri = orb((1, 2), (INF, 2))
    chet = orb((-1, 2), (INF, 2))
    assert any(o.same_orbifold(tri) for o in rep.orbifolds)
    assert any(o.same_orbifold(chet) for o in rep.orbifolds)
    assert any(o.same_orbifold(pm1) for o in rep.orbifolds)
    dva_ns = [n for n in range(2, cap + 1) if math.gcd(5, n) == 1]
    for n in dva_ns:
        want = orb((-1, 2), (1, 2), (INF, n))
        assert any(o.same_orbifold(want) for o in rep.orbifolds), n
    # nothing beyond those patterns
    expected = [pm1, tri, chet] + [orb((-1, 2), (1, 2), (INF, n)) for n in dva_ns]
    for o in rep.orbifolds:
        assert any(o.same_orbifold(w) for w in expected), o


def test_chebyshev_even_degree_excludes_tri_chet():
    rep = detect_generalized_lattes(chebyshev(4), search_bound=6)
    tri = orb((1, 2), (INF, 2))
    chet = orb((-1, 2), (INF, 2))
    assert not any(o.same_orbifold(tri) for o in rep.orbifolds)
    assert not any(o.same_orbifold(chet) for o in rep.orbifolds)
    # (dva) requires gcd(4, n) = 1: only odd n
    for o in rep.orbifolds:
        sig = o.signature()
        if len(sig) == 3:
            assert math.gcd(4, sig[2]) == 1


# ---------------------------------------------------------------- invariances


def test_mobius_invariance_of_detection():
    mu = Mobius.from_ratfunc(parse("z/(z+3)"))
    rep = detect_generalized_lattes(A)
    rep_conj = detect_generalized_lattes(conjugate(A, mu))
    assert rep_conj.maximal.same_orbifold(transport(rep.maximal, mu))


def test_chi_nonnegative_for_admissible():
    for f in (A, ATILDE, parse("z*(z+1)^2")):
        rep = detect_generalized_lattes(f)
        for o in rep.orbifolds:
            assert o.euler_char() >= 0


def test_maximal_orbifold_consistency():
    assert maximal_orbifold_consistency(A, 2)
    assert maximal_orbifold_consistency(parse("z*(z+1)^2"), 2)
    assert maximal_orbifold_consistency(parse("z^2+1"), 2)  # both empty


def test_consistency_rejects_special():
    with pytest.raises(PreconditionError):
        maximal_orbifold_consistency(parse("z^5"), 2)
