"""Monodromy, fiber products, genus tables, good solutions, the m/42 bound."""

import math
import random

import pytest

from ratorb.errors import PreconditionError
from ratorb.fibercurve import (
    check_good_solution,
    fiber_components,
    genus_sequence,
    monodromy,
    theorem_m2_check,
)
from ratorb.parse import parse
from ratorb.permgroup import cycle_count, identity, multiply
from ratorb.poly import Poly
from ratorb.ratfunc import RatFunc, chebyshev, compose

ATILDE = parse("48*z/(4*z+3)^2")
UTILDE = parse("z^2/(z^2+3)")
V = parse("12*z/(4*z^2-3)")
THETA = parse("z^2")


# ---------------------------------------------------------------- monodromy


def test_monodromy_square():
    md = monodromy(parse("z^2"))
    assert len(md.permutations) == 2
    assert all(sorted(p) == [0, 1] and p != [0, 1] for p in md.permutations)
    assert md.group_order == 2


def test_monodromy_atilde():
    md = monodromy(ATILDE)
    vals = sorted(str(p) for p in md.branch_values)
    assert vals == ["1", "inf"]
    assert md.group_order == 2


def test_monodromy_chebyshev3():
    md = monodromy(chebyshev(3))
    assert md.group_order == 6  # dihedral S3
    by_value = {str(p): perm for p, perm in zip(md.branch_values, md.permutations)}
    assert set(by_value) == {"-1", "1", "inf"}
    for v in ("-1", "1"):
        assert cycle_count(by_value[v]) == 2  # transposition on 3 sheets
    assert cycle_count(by_value["inf"]) == 1  # 3-cycle


def test_monodromy_product_identity_and_transitivity():
    for f in [parse("z^3-3*z+1"), parse("(z^2+1)/(z^2-1)"), chebyshev(4)]:
        md = monodromy(f)
        prod = identity(f.degree)
        for p in md.permutations:
            prod = multiply(p, prod)
        assert prod == identity(f.degree)


# ---------------------------------------------------------------- fiber components


def test_fiber_components_square_square():
    dec = fiber_components(parse("z^2"), parse("z^2"))
    assert dec.n == 2
    assert all(c.deg_p == 1 and c.deg_q == 1 and c.genus == 0 for c in dec.components)


def test_fiber_components_square_cube():
    dec = fiber_components(parse("z^2"), parse("z^3"))
    assert dec.n == 1
    c = dec.components[0]
    assert (c.deg_p, c.deg_q, c.genus) == (3, 2, 0)


def test_fiber_components_paper_pair():
    dec = fiber_components(ATILDE, UTILDE)
    assert dec.n == 1
    c = dec.components[0]
    assert (c.deg_p, c.deg_q, c.genus) == (2, 2, 0)
    # cross-check: the parametrization pair (theta, V) satisfies U o V = A o theta
    assert compose(UTILDE, V) == compose(ATILDE, THETA)


def test_fiber_components_degree_one_shortcut():
    dec = fiber_components(parse("z+1"), parse("z^3"))
    assert dec.n == 1 and dec.components[0].genus == 0


def test_fiber_components_invariants_random():
    rng = random.Random(5)
    done = 0
    while done < 6:
        num1 = Poly([rng.randint(-3, 3) for _ in range(rng.randint(2, 4))])
        den1 = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))])
        num2 = Poly([rng.randint(-3, 3) for _ in range(rng.randint(2, 4))])
        den2 = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))])
        if num1.is_zero() or den1.is_zero() or num2.is_zero() or den2.is_zero():
            continue
        f, g = RatFunc(num1, den1), RatFunc(num2, den2)
        if not (2 <= f.degree <= 3 and 2 <= g.degree <= 3):
            continue
        dec = fiber_components(f, g)
        assert sum(c.deg_p for c in dec.components) == g.degree
        assert sum(c.deg_q for c in dec.components) == f.degree
        assert dec.n <= math.gcd(f.degree, g.degree)
        assert all(c.genus >= 0 for c in dec.components)
        for c in dec.components:
            if c.deg_p == 1 or c.deg_q == 1:
                assert c.genus == 0
        done += 1


# ---------------------------------------------------------------- genus sequences


def test_genus_sequence_power_maps():
    rows = genus_sequence(parse("z^2"), parse("z^2"), 2)
    assert [r["min_genus"] for r in rows] == [0, 0]


def test_genus_sequence_paper_pair():
    rows = genus_sequence(ATILDE, UTILDE, 3)
    assert all(r["min_genus"] <= 1 for r in rows)
    ns = [r["n"] for r in rows]
    assert all(ns[i] <= ns[i + 1] for i in range(len(ns) - 1))


# ---------------------------------------------------------------- good solutions


def test_good_solution_paper_diagram():
    rep = check_good_solution(UTILDE, V, ATILDE, THETA)
    assert rep.degrees_match
    assert rep.unique_component
    assert rep.no_common_right_factor
    assert rep.good


def test_good_solution_fails_for_squares():
    z2 = parse("z^2")
    rep = check_good_solution(z2, z2, z2, z2)
    assert not rep.unique_component
    assert not rep.no_common_right_factor
    assert rep.degrees_match
    assert not rep.good


def test_good_solution_identity_projections():
    f = parse("z^2+1")
    rep = check_good_solution(f, parse("z"), f, parse("z"))
    assert rep.unique_component is False or rep.unique_component is True  # diagnostics exist
    assert rep.no_common_right_factor


def test_good_solution_requires_commutation():
    with pytest.raises(ValueError):
        check_good_solution(parse("z^2"), parse("z"), parse("z^3"), parse("z"))


# ---------------------------------------------------------------- theorem m2


def test_m2_inequality_on_generic_pair():
    w = parse("z^4+z")
    res = theorem_m2_check(w, parse("z^3+2"))
    assert res["holds"]
    assert res["chi_O2W"] < 0


def test_m2_self_pair_violates_uniqueness():
    w = parse("z^4+z")
    with pytest.raises(PreconditionError):
        theorem_m2_check(w, w)


def test_m2_positive_chi_rejected():
    with pytest.raises(PreconditionError):
        theorem_m2_check(parse("z^4"), parse("z^3"))
