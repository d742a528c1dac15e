import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from udembed.graphs import catalog
from udembed.groebner import (
    FEASIBLE,
    INFEASIBLE,
    LIMIT_EXCEEDED,
    Limits,
    buchberger,
    check_distinct,
    extract_solutions,
    is_groebner,
    is_reduced,
    normal_form,
    real_roots,
    s_polynomial,
)
from udembed.poly import (
    LEX,
    MonomialOrder,
    Polynomial,
    auto_pin,
    distance_constraints,
    format_poly,
    parse_poly,
    primitive,
    same_part_pairs,
    saturate_distinctness,
)

NAMES = ["x", "y", "z"]
GREVLEX = MonomialOrder("grevlex")

small_coeffs = st.integers(-3, 3)
small_monos = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1))
small_polys = st.dictionaries(small_monos, small_coeffs, min_size=1, max_size=3).map(
    lambda d: Polynomial(3, d)).filter(lambda p: not p.is_zero())
systems = st.lists(small_polys, min_size=1, max_size=3)
LIMITS = Limits(max_pairs=2000, max_degree=12, max_work=200_000)


def k4e():
    g = catalog("k4_minus_e")
    return distance_constraints(g, auto_pin(g))


def test_s_polynomial_cancels_leading_terms():
    f = parse_poly("x^2 y - 1", NAMES)
    g = parse_poly("x y^2 - x", NAMES)
    s = s_polynomial(f, g)
    assert s == parse_poly("x^2 - y", NAMES)


def test_normal_form_division():
    f = parse_poly("x^2 y + x y^2 + y^2", NAMES)
    G = [parse_poly("x y - 1", NAMES), parse_poly("y^2 - 1", NAMES)]
    r = normal_form(f, G)
    assert r == parse_poly("x + y + 1", NAMES)


def test_k4e_reduced_basis():
    res = buchberger(k4e())
    assert res.status == FEASIBLE
    assert set(res.lines()) == {"4*y4^3 - 3*y4", "x4 - 2*y4^2", "y3*y4 - y4^2", "4*y3^2 - 3", "2*x3 - 1"}
    assert is_groebner(res.basis) and is_reduced(res.basis)


def test_k4_infeasible():
    g = catalog("k4")
    res = buchberger(distance_constraints(g, auto_pin(g)))
    assert res.status == INFEASIBLE
    assert res.lines() == ["1"]


def test_k2_3_saturated_infeasible_both_orders():
    g = catalog("k2_3")
    sys_ = saturate_distinctness(distance_constraints(g, auto_pin(g)), same_part_pairs(g))
    for order in (LEX, GREVLEX):
        assert buchberger(sys_, order).status == INFEASIBLE


def test_limit_exceeded():
    g = catalog("petersen")
    res = buchberger(distance_constraints(g, auto_pin(g)), limits=Limits(max_pairs=3))
    assert res.status == LIMIT_EXCEEDED
    assert res.stats["limit"] == "pairs"
    assert not res.feasible


def test_empty_and_constant_systems():
    assert buchberger([Polynomial.constant(2, 5)]).status == INFEASIBLE
    assert buchberger([Polynomial(2)], names=["a", "b"]).basis == []


def _sympy_reduced(polys, order):
    xs = sympy.symbols(NAMES)
    exprs = [sum(int(c) * sympy.prod([v**e for v, e in zip(xs, m)]) for m, c in p.terms.items()) for p in polys]
    G = sympy.groebner(exprs, *xs, order="lex" if order is LEX else "grevlex")
    out = set()
    for g in G.exprs:
        poly = sympy.Poly(g, *xs)
        p = Polynomial(3, {m: Fraction(int(c.p), int(c.q)) for m, c in zip(poly.monoms(), poly.coeffs())})
        out.add(format_poly(primitive(p, order), NAMES, order))
    return out


@settings(max_examples=100, deadline=None)
@given(systems, st.sampled_from([LEX, GREVLEX]))
def test_basis_matches_sympy(polys, order):
    res = buchberger(polys, order, LIMITS, names=NAMES)
    assume(res.status != LIMIT_EXCEEDED)
    assert set(res.lines()) == _sympy_reduced(polys, order)


@settings(max_examples=100, deadline=None)
@given(systems, st.sampled_from([LEX, GREVLEX]))
def test_buchberger_self_test(polys, order):
    # every S-pair of the output reduces to zero, and every input is in the ideal
    res = buchberger(polys, order, LIMITS, names=NAMES)
    assume(res.status != LIMIT_EXCEEDED)
    G = res.basis
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert normal_form(s_polynomial(G[i], G[j], order), G, order).is_zero()
    for p in polys:
        assert normal_form(p, G, order).is_zero()
    assert is_reduced(G, order)


@settings(max_examples=100, deadline=None)
@given(systems, st.integers(0, 2**32 - 1), st.sampled_from([LEX, GREVLEX]))
def test_reduced_basis_unique_under_shuffle(polys, seed, order):
    base = buchberger(polys, order, LIMITS, names=NAMES)
    assume(base.status != LIMIT_EXCEEDED)
    rng = random.Random(seed)
    shuffled = list(polys)
    rng.shuffle(shuffled)
    # scaling generators by units and adding a combination leaves the ideal unchanged
    shuffled = [p.scale(rng.choice([1, -2, 3])) for p in shuffled]
    if len(shuffled) > 1:
        shuffled[0] = shuffled[0] + shuffled[1] * Polynomial.var(3, rng.randrange(3))
    other = buchberger(shuffled, order, LIMITS, names=NAMES, tie_seed=seed)
    assume(other.status != LIMIT_EXCEEDED)
    assert set(other.lines()) == set(base.lines())


def test_real_roots_known():
    assert np.allclose(real_roots([1, 0, -2]), [-math.sqrt(2), math.sqrt(2)], atol=1e-15)
    assert real_roots([1, 0, 1]) == []
    r = real_roots([4, 0, -3, 0])
    assert np.allclose(r, [-math.sqrt(3) / 2, 0, math.sqrt(3) / 2], atol=1e-15)
    # double root
    r = real_roots([1, -2, 1])
    assert len(r) == 1 and abs(r[0] - 1) < 1e-7


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5, unique=True))
def test_real_roots_of_products(roots):
    coeffs = np.poly(roots)
    found = real_roots(coeffs)
    assert len(found) == len(roots)
    assert np.allclose(found, sorted(roots), atol=1e-8)


def test_extract_k4e():
    sys_ = k4e()
    res = buchberger(sys_)
    ex = extract_solutions(res)
    assert ex.triangular
    coords = [sys_.coords_from_solution(s) for s in ex.solutions]
    report = check_distinct(coords, sys_.graph)
    assert len(report) == 4
    dup = [d for _, d in report if d]
    assert dup == [[("1", "4")], [("1", "4")]]


def test_extract_nontriangular():
    g = catalog("k2_3")
    res = buchberger(distance_constraints(g, auto_pin(g)))
    assert res.status == FEASIBLE
    ex = extract_solutions(res)
    assert not ex.triangular and ex.solutions == []


def test_extract_rejects_infeasible():
    g = catalog("k4")
    with pytest.raises(ValueError):
        extract_solutions(buchberger(distance_constraints(g, auto_pin(g))))


def _k2_3():
    g = catalog("k2_3")
    return distance_constraints(g, auto_pin(g))


@settings(max_examples=100, deadline=None)
@given(which=st.sampled_from(["k4_minus_e", "k2_3"]), seed=st.integers(0, 2**32 - 1),
       order=st.sampled_from([LEX, GREVLEX]))
def test_graph_basis_unique_under_shuffle(which, seed, order):
    sys_ = k4e() if which == "k4_minus_e" else _k2_3()
    base = buchberger(sys_, order)
    polys = list(sys_.nonzero_polys())
    random.Random(seed).shuffle(polys)
    other = buchberger(polys, order, names=sys_.names, tie_seed=seed)
    assert set(other.lines()) == set(base.lines())


def test_every_feasible_basis_passes_self_test():
    for sys_ in (k4e(), _k2_3()):
        res = buchberger(sys_)
        assert is_groebner(res.basis)
        for p in sys_.nonzero_polys():
            assert normal_form(p, res.basis).is_zero()


def test_extracted_solutions_satisfy_inputs():
    sys_ = k4e()
    ex = extract_solutions(buchberger(sys_))
    for sol in ex.solutions:
        pt = [sol[n] for n in sys_.names]
        for p in sys_.nonzero_polys():
            assert abs(p.evaluate(pt)) < 1e-9


def test_k4_infeasible_agrees_with_numeric_solver():
    from udembed.embed import SolveOptions, solve

    for seed in range(5):
        res = solve(catalog("k4"), SolveOptions(restarts=20, seed=seed))
        assert not res.success and res.residual >= 1e-9


def test_k4e_saturated_over_all_pairs_stays_feasible():
    sys_ = k4e()
    g = sys_.graph
    pairs = [(g.labels[i], g.labels[j]) for i in range(g.n) for j in range(i + 1, g.n)]
    res = buchberger(saturate_distinctness(sys_, pairs))
    assert res.status == FEASIBLE
