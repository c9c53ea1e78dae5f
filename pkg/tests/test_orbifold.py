"""Orbifold calculus: Euler characteristics, map kinds, canonical pairs, pullback."""

import random
from fractions import Fraction

import pytest

from ratorb.errors import BadOrbifoldError
from ratorb.numeric import critical_data
from ratorb.orbifold import (
    MapKind,
    Orbifold,
    canonical_orbifolds,
    classify_map,
    preceq,
    pullback,
)
from ratorb.parse import parse
from ratorb.points import AlgebraicPoint
from ratorb.poly import Poly
from ratorb.ratfunc import INF, Mobius, ProjPoint, RatFunc, compose

A = parse("144*z*(z+3)/(z-9)^2")
ATILDE = parse("48*z/(4*z+3)^2")


def orb(*marks):
    return Orbifold([(AlgebraicPoint.from_exact(p), nu) for p, nu in marks])


# ---------------------------------------------------------------- goodness & chi


def test_goodness_enforced():
    with pytest.raises(BadOrbifoldError):
        orb((0, 2))
    with pytest.raises(BadOrbifoldError):
        orb((0, 2), (1, 3))
    assert orb((0, 2), (1, 2)).is_good()
    assert orb((0, 2), (1, 2), (INF, 5)).is_good()


def test_euler_char_examples():
    assert Orbifold.trivial().euler_char() == 2
    assert orb((0, 2), (1, 3), (INF, 7)).euler_char() == Fraction(-1, 42)
    assert orb((0, 2), (1, 2), (2, 2), (INF, 2)).euler_char() == 0


def test_preceq_examples():
    # preceq has no goodness precondition; the spec examples use bad orbifolds
    o_small = Orbifold.unchecked([(AlgebraicPoint.from_exact(0), 2)])
    o_big = Orbifold.unchecked([(AlgebraicPoint.from_exact(0), 4), (AlgebraicPoint.infinity(), 2)])
    assert preceq(o_small, o_big)
    assert not preceq(orb((0, 3), (1, 3)), orb((0, 2), (1, 2)))
    # chi antitone under preceq
    assert o_small.euler_char() >= o_big.euler_char()


# ---------------------------------------------------------------- classify_map


def test_classify_paper_minimal_holomorphic():
    o = orb((0, 2), (-3, 2))
    assert classify_map(A, o, o) == MapKind.MinimalHolomorphic


def test_classify_cube_on_two_marks():
    o = orb((0, 2), (INF, 2))
    assert classify_map(parse("z^3"), o, o) == MapKind.MinimalHolomorphic


def test_classify_square_covering_from_trivial():
    # z^2: (sphere, no marks) -> (sphere, {nu(0)=2, nu(inf)=2}) is a covering
    # (Eq. nu2(f(z)) = nu1(z) deg_z f; the marked orbifold sits downstairs)
    o2 = orb((0, 2), (INF, 2))
    assert classify_map(parse("z^2"), Orbifold.trivial(), o2) == MapKind.Covering
    # the reversed direction is not even holomorphic at the critical points
    assert classify_map(parse("z^2"), o2, Orbifold.trivial()) != MapKind.Covering


def test_classify_sees_hidden_critical_point():
    # no marks anywhere, but critical points force gcd conditions:
    # a covering to the trivial orbifold is impossible for deg >= 2
    f = parse("z^3+z")
    assert classify_map(f, Orbifold.trivial(), Orbifold.trivial()) == MapKind.MinimalHolomorphic


def test_classify_anonymous_preimages_break_minimality():
    # z^2: fiber over 1 is {1, -1}, simple and unmarked; nu(1) = 2 downstairs
    # forces failure of minimality at those anonymous points
    o2 = orb((1, 2), (-1, 2))
    assert classify_map(parse("z^2"), Orbifold.trivial(), o2) == MapKind.NotHolomorphic


# ---------------------------------------------------------------- canonical pair


def test_canonical_power_map():
    for n in (2, 3, 5):
        o1, o2 = canonical_orbifolds(parse(f"z^{n}"))
        assert o2.same_orbifold(orb((0, n), (INF, n)))
        assert o1.is_trivial()


def test_canonical_chebyshev4():
    _, o2 = canonical_orbifolds(parse("T(4)"))
    assert o2.same_orbifold(orb((-1, 2), (1, 2), (INF, 4)))


def test_canonical_atilde():
    _, o2 = canonical_orbifolds(ATILDE)
    assert o2.same_orbifold(orb((1, 2), (INF, 2)))


def test_canonical_chi_multiplicativity_smoke():
    rng = random.Random(3)
    done = 0
    while done < 8:
        num = Poly([rng.randint(-3, 3) for _ in range(rng.randint(2, 5))])
        den = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 5))])
        if num.is_zero() or den.is_zero():
            continue
        f = RatFunc(num, den)
        if f.degree < 2 or f.degree > 4:
            continue
        o1, o2 = canonical_orbifolds(f)
        assert o1.euler_char() == f.degree * o2.euler_char()
        assert classify_map(f, o1, o2) == MapKind.Covering
        done += 1


# ---------------------------------------------------------------- pullback


def test_pullback_square_divides():
    res = pullback(parse("z^2"), orb((0, 4), (INF, 4)))
    assert res.good
    assert res.orbifold.same_orbifold(orb((0, 2), (INF, 2)))


def test_pullback_square_of_cubic_marks():
    res = pullback(parse("z^2"), orb((1, 3), (-1, 3)))
    assert res.good
    o = res.orbifold
    assert o.signature() == (3, 3, 3, 3)
    assert o.nu_at(AlgebraicPoint.from_exact(1)) == 3
    assert o.nu_at(AlgebraicPoint.from_exact(-1)) == 3


def test_pullback_defining_property_random():
    rng = random.Random(11)
    done = 0
    while done < 10:
        num = Poly([rng.randint(-3, 3) for _ in range(rng.randint(2, 4))])
        den = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 4))])
        if num.is_zero() or den.is_zero():
            continue
        f = RatFunc(num, den)
        if f.degree < 2 or f.degree > 3:
            continue
        marks = [(rng.choice([0, 1, -1, 2, INF]), rng.choice([2, 2, 3, 4]))]
        marks.append((3, marks[0][1]))
        try:
            o = orb(*marks)
        except BadOrbifoldError:
            continue
        res = pullback(f, o)
        if not res.good:
            continue
        assert classify_map(f, res.orbifold, o) >= MapKind.MinimalHolomorphic
        done += 1


def test_pullback_chain_rule():
    g = parse("z^2")
    f = parse("z^3")
    o = orb((1, 2), (-1, 2))
    lhs = pullback(compose(g, f), o).orbifold
    rhs = pullback(f, pullback(g, o).orbifold).orbifold
    assert lhs.same_orbifold(rhs)


# ---------------------------------------------------------------- p1 inequality


def test_p1_inequality_on_minimal_holomorphic():
    # A: O -> O minimal holomorphic, not covering: strict inequality
    o = orb((0, 2), (-3, 2))
    assert classify_map(A, o, o) == MapKind.MinimalHolomorphic
    assert o.euler_char() < A.degree * o.euler_char() or A.degree == 1
    # covering case: equality (canonical pair)
    o1, o2 = canonical_orbifolds(A)
    assert o1.euler_char() == A.degree * o2.euler_char()


def test_indu2_decomposition():
    # g o f minimal holomorphic o -> o2 implies g: g*o2 -> o2 minimal holomorphic
    g = parse("z^2")
    f = parse("z^3")
    o2 = orb((0, 2), (INF, 2))
    o = pullback(compose(g, f), o2).orbifold
    assert classify_map(compose(g, f), o, o2) >= MapKind.MinimalHolomorphic
    mid = pullback(g, o2).orbifold
    assert classify_map(g, mid, o2) >= MapKind.MinimalHolomorphic


# ---------------------------------------------------------------- JSON round trip


def test_orbifold_json_roundtrip():
    o = orb((0, 2), (Fraction(-3, 4), 2), (INF, 5))
    o2 = Orbifold.from_json(o.to_json())
    assert o.same_orbifold(o2)
