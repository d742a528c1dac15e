from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from udembed.graphs import GraphError, catalog
from udembed.poly import (
    LEX,
    MonomialOrder,
    Polynomial,
    PolyParseError,
    auto_pin,
    distance_constraints,
    format_poly,
    monic,
    parse_poly,
    primitive,
    same_part_pairs,
    saturate_distinctness,
)

NV = 3
NAMES = ["x", "y", "z"]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monos = st.tuples(*[st.integers(0, 3)] * NV)
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Polynomial(NV, d))


def to_sympy(p: Polynomial):
    xs = sympy.symbols(NAMES)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(
        [v**e for v, e in zip(xs, m)]) for m, c in p.terms.items()))


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial(NV)
    assert p * 1 == p and p + 0 == p


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@settings(max_examples=100, deadline=None)
@given(polys)
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p, NAMES, clear=False), NAMES) == p


@settings(max_examples=100, deadline=None)
@given(polys, st.tuples(coeffs, coeffs, coeffs))
def test_substitute_agrees_with_evaluate(p, point):
    full = p.substitute(dict(enumerate(point)))
    assert full.is_constant()
    assert full == p.evaluate(point)


def test_orders():
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    p = x + y**2
    assert LEX.leading(p)[0] == (1, 0)
    assert MonomialOrder("grevlex").leading(p)[0] == (0, 2)
    assert MonomialOrder("lex", (1, 0)).leading(p)[0] == (0, 2)
    # grevlex tie-break: x*z^2 < x^2*z... smallest last variable exponent wins
    g = MonomialOrder("grevlex")
    assert g.key((1, 1, 0)) > g.key((1, 0, 1)) > g.key((0, 1, 1))
    with pytest.raises(ValueError):
        MonomialOrder("deglex")
    with pytest.raises(ValueError):
        MonomialOrder("lex", (0, 0))


def test_primitive_and_monic():
    p = parse_poly("-1/2*x^2 + 3/4*y", NAMES)
    assert format_poly(primitive(p), NAMES, clear=False) == "2*x^2 - 3*y"
    assert monic(p).terms[(2, 0, 0)] == 1


def test_parse_forms():
    assert parse_poly("x y", NAMES) == parse_poly("x*y", NAMES)
    assert parse_poly("x**2", NAMES) == parse_poly("x^2", NAMES)
    assert parse_poly("4 y^3 = 3 y", NAMES) == parse_poly("4*y^3 - 3*y", NAMES)
    assert parse_poly("(x - 1)^2", NAMES) == parse_poly("x^2 - 2x + 1", NAMES)
    for bad in ("x +", "w", "(x", "x ^ y", "1/0"):
        with pytest.raises((PolyParseError, ZeroDivisionError)):
            parse_poly(bad, NAMES)


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        Polynomial(1, {(1,): 0.5})


def test_k4e_system_shape():
    g = catalog("k4_minus_e")
    sys_ = distance_constraints(g, auto_pin(g))
    assert sys_.names == ["x3", "y3", "x4", "y4"]
    assert len(sys_.polys) == sys_.n_distance == 5
    assert len(sys_.nonzero_polys()) == 4  # edge 1-2 is satisfied by the pins
    texts = [format_poly(p, sys_.names) for p in sys_.nonzero_polys()]
    assert "x3^2 + y3^2 - 1" in texts


@settings(max_examples=100, deadline=None)
@given(name=st.sampled_from(["k4_minus_e", "k2_3", "moser_spindle", "petersen"]),
       data=st.data())
def test_pin_substitution_consistency(name, data):
    g = catalog(name)
    pins = auto_pin(g)
    free = distance_constraints(g)
    pinned = distance_constraints(g, pins)
    values = {}
    for lab, (x, y) in pins.items():
        values[free.vars.index(f"x{lab}")] = x
        values[free.vars.index(f"y{lab}")] = y
    # evaluate both at the same random rational point
    pt = {n: data.draw(coeffs) for n in pinned.names}
    full = [pt[n] if n in pt else None for n in free.names]
    for k, v in values.items():
        full[k] = v
    for a, b in zip(free.polys, pinned.polys):
        assert a.evaluate(full) == b.evaluate([pt[n] for n in pinned.names])


def test_saturation_appends_aux_last():
    g = catalog("k2_3")
    sys_ = saturate_distinctness(distance_constraints(g, auto_pin(g)), same_part_pairs(g))
    aux = sys_.vars.auxiliaries()
    assert aux == list(range(len(sys_.names) - 4, len(sys_.names)))
    assert sys_.saturated_pairs == (("1", "2"), ("3", "4"), ("3", "5"), ("4", "5"))
    with pytest.raises(GraphError):
        saturate_distinctness(sys_, [("1", "1")])


def test_same_part_pairs_rejects_odd_cycle():
    with pytest.raises(GraphError):
        same_part_pairs(catalog("k3"))


def test_pins_unknown_vertex():
    with pytest.raises(GraphError):
        distance_constraints(catalog("k3"), {"9": (0, 0)})


def test_pinned_relations_and_solution_coords():
    g = catalog("k4_minus_e")
    sys_ = distance_constraints(g, auto_pin(g))
    rel = [t for t, _, _ in sys_.pinned_relations()]
    assert rel == ["x1", "y1", "x2 - 1", "y2"]
    coords = sys_.coords_from_solution({"x3": 0.5, "y3": 1.0, "x4": 1.5, "y4": 1.0})
    assert coords["2"] == (1.0, 0.0) and coords["4"] == (1.5, 1.0)
    assert Fraction(0) == sys_.pins["1"][0]


@settings(max_examples=100, deadline=None)
@given(monos, monos, monos, st.sampled_from(["lex", "grevlex"]),
       st.permutations(range(NV)))
def test_monomial_order_is_multiplicative(a, b, t, kind, perm):
    order = MonomialOrder(kind, tuple(perm))
    mul = lambda m: tuple(x + y for x, y in zip(m, t))  # noqa: E731
    if order.key(a) < order.key(b):
        assert order.key(mul(a)) < order.key(mul(b))
    assert order.key((0,) * NV) <= order.key(a)
    # totality: distinct monomials never tie
    assert (order.key(a) == order.key(b)) == (a == b)


def test_distance_polys_vanish_on_unit_edges():
    g = catalog("k2")
    sys_ = distance_constraints(g)
    assert len(sys_.polys) == len(g.edges) == sys_.n_distance
    for pt in ([0, 0, 1, 0], [0, 0, Fraction(3, 5), Fraction(4, 5)]):
        assert sys_.polys[0].evaluate(pt) == 0


def test_pinned_k2_3_edge_expands_by_hand():
    g = catalog("k2_3")
    sys_ = distance_constraints(g, {"3": (1, 0)})
    x2, y2 = sys_.names.index("x2"), sys_.names.index("y2")
    p = sys_.polys[[e for e in g.edge_labels()].index(("2", "3"))]
    assert p.variables() == {x2, y2}
    assert format_poly(p, sys_.names) == "x2^2 - 2*x2 + y2^2"


@pytest.mark.parametrize("name", ["k4_minus_e", "moser_spindle"])
def test_pin_consistency_at_numeric_embedding(name):
    from udembed.embed import solve

    g = catalog(name)
    X = solve(g).embedding.coords
    # move the first edge onto (0,0)-(1,0) so the pins hold
    u, v = g.edges[0]
    d = X[v] - X[u]
    R = np.array([[d[0], d[1]], [-d[1], d[0]]]) / np.hypot(*d)
    X = (X - X[u]) @ R.T
    pins = auto_pin(g)
    free = distance_constraints(g)
    pinned = distance_constraints(g, pins)
    cm = dict(zip(g.labels, X.tolist()))
    full = [cm[v.vertex][0 if v.axis == "x" else 1] for v in free.vars.entries]
    part = [cm[v.vertex][0 if v.axis == "x" else 1] for v in pinned.vars.entries]
    for a, b in zip(free.polys, pinned.polys):
        assert abs(float(a.evaluate(full)) - float(b.evaluate(part))) < 1e-12
