import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from udembed.embed import (
    Embedding,
    SolveOptions,
    _residuals,
    as_array,
    numerical_rank,
    refine,
    rigidity_matrix,
    rigidity_report,
    similarity_scale,
    solve,
    verify,
)
from udembed.graphs import Graph, GraphError, catalog

MOSER_FIGURE = {
    "1": (0, 1), "2": (-0.728714, 0.32), "3": (-0.228714, 0), "4": (0.228714, 0),
    "5": (0.728714, 0.32), "6": (-0.5, -0.68), "7": (0.5, -0.68),
}


def _moser():
    g = catalog("moser_spindle")
    return g, refine(g, MOSER_FIGURE)


def test_verify_k4e_exact():
    g = catalog("k4_minus_e")
    h = math.sqrt(3) / 2
    v = verify(g, {"1": (0, 0), "2": (1, 0), "3": (0.5, h), "4": (1.5, h)})
    assert v.passed and v.max_edge_deviation < 1e-15
    bad = verify(g, {"1": (0, 0), "2": (1, 0), "3": (0.5, h), "4": (0, 0)})
    assert not bad.passed and bad.min_separation == 0


def test_as_array_errors():
    g = catalog("k2")
    with pytest.raises(GraphError):
        as_array(g, {"1": (0, 0)})
    with pytest.raises(GraphError):
        as_array(g, np.zeros((3, 2)))


@settings(max_examples=100, deadline=None)
@given(name=st.sampled_from(["k4_minus_e", "moser_spindle", "petersen", "k2_3", "heawood_minus_edge"]),
       seed=st.integers(0, 2**32 - 1))
def test_jacobian_matches_finite_differences(name, seed):
    g = catalog(name)
    rng = np.random.default_rng(seed)
    X = rng.uniform(-2, 2, size=(g.n, 2))
    J = rigidity_matrix(g, X)

    def f(flat):
        Y = flat.reshape(-1, 2)
        return np.array([np.sum((Y[u] - Y[v]) ** 2) for u, v in g.edges])

    h = 1e-6
    flat = X.reshape(-1)
    fd = np.zeros_like(J)
    for k in range(flat.size):
        e = np.zeros_like(flat)
        e[k] = h
        fd[:, k] = (f(flat + e) - f(flat - e)) / (2 * h)
    assert np.max(np.abs(J - fd)) <= 1e-6 * max(1.0, np.max(np.abs(J)))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_repulsion_jacobian_matches_finite_differences(seed):
    g = catalog("k2_3")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-0.3, 0.3, size=(g.n, 2))
    floor = 0.5
    r, J, _ = _residuals(g, X, floor, 1.0)
    h = 1e-7
    flat = X.reshape(-1)
    for k in range(flat.size):
        e = np.zeros_like(flat)
        e[k] = h
        rp, _, _ = _residuals(g, (flat + e).reshape(-1, 2), floor, 1.0)
        rm, _, _ = _residuals(g, (flat - e).reshape(-1, 2), floor, 1.0)
        if len(rp) != len(r) or len(rm) != len(r):
            continue  # a pair crossed the floor; the active set changed
        fd = (rp - rm) / (2 * h)
        assert np.allclose(J[:, k], fd, rtol=1e-6, atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(theta=st.floats(-math.pi, math.pi), tx=st.floats(-100, 100), ty=st.floats(-100, 100),
       flip=st.booleans())
def test_verify_gauge_invariant(theta, tx, ty, flip):
    g, emb = _moser()
    base = verify(g, emb.coords)
    R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    if flip:
        R = R @ np.diag([1.0, -1.0])
    Y = emb.coords @ R.T + np.array([tx, ty])
    moved = verify(g, Y)
    assert moved.passed == base.passed
    assert abs(moved.max_edge_deviation - base.max_edge_deviation) < 1e-12
    assert abs(moved.min_separation - base.min_separation) < 1e-12


def test_solve_trivial():
    res = solve(catalog("k2"))
    assert res.success
    assert np.allclose(res.embedding.coords, [[0, 0], [1, 0]])


def test_solve_triangle_and_k4e():
    for name in ("k3", "k4_minus_e"):
        res = solve(catalog(name), SolveOptions(restarts=20))
        assert res.success
        assert verify(res.embedding.graph, res.embedding.coords).passed


def test_solve_k4_fails():
    res = solve(catalog("k4"), SolveOptions(restarts=10))
    assert not res.success
    assert res.residual > 1e-3
    assert res.restarts_used == 10


def test_solve_reproducible():
    g = catalog("moser_spindle")
    a = solve(g, SolveOptions(restarts=20, seed=7))
    b = solve(g, SolveOptions(restarts=20, seed=7))
    assert np.array_equal(a.embedding.coords, b.embedding.coords)


def test_solve_disconnected():
    g = Graph.from_edges(["a", "b", "c", "d", "e"], [("a", "b"), ("c", "d")])
    res = solve(g)
    assert res.success
    assert len(res.components) == 3
    assert verify(g, res.embedding.coords).passed


def test_solve_options_validation():
    with pytest.raises(ValueError):
        SolveOptions(restarts=0)
    with pytest.raises(ValueError):
        SolveOptions(residual_tol=0)


def test_similarity_scale_recovers_factor():
    g, emb = _moser()
    assert abs(similarity_scale(g, 3.0 * emb.coords) - 1 / 3) < 1e-12


def test_refine_figure_coordinates():
    g, emb = _moser()
    assert emb.converged
    assert emb.max_edge_deviation < 1e-12
    assert emb.min_separation > 0.1


def test_rigidity_moser_rigid():
    g, emb = _moser()
    rep = rigidity_report(g, emb)
    assert rep.jacobian_rank == 11 and rep.rigid


def test_rigidity_square_flexes():
    sq = Graph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    rep = rigidity_report(sq, {"a": (0, 0), "b": (1, 0), "c": (1, 1), "d": (0, 1)})
    assert rep.flex_count == 1 and not rep.rigid
    with pytest.raises(GraphError):
        rigidity_report(catalog("k2_3"), np.zeros((5, 2)))


def test_numerical_rank():
    A = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])
    assert numerical_rank(A) == 1
    assert numerical_rank(np.eye(4)) == 4
    assert numerical_rank(np.zeros((2, 3))) == 0
    rng = np.random.default_rng(1)
    B = rng.normal(size=(6, 3)) @ rng.normal(size=(3, 8))
    assert numerical_rank(B) == np.linalg.matrix_rank(B) == 3


def test_embedding_coord_map():
    g = catalog("k2")
    emb = Embedding(g, {"1": (0, 0), "2": (1, 0)})
    assert emb.coord_map() == {"1": (0.0, 0.0), "2": (1.0, 0.0)}


def test_refine_exact_solution_is_fixed_point():
    g = catalog("k4_minus_e")
    h = math.sqrt(3) / 2
    X = np.array([[0, 0], [1, 0], [0.5, h], [1.5, h]])
    out = refine(g, X, allow_similarity=False)
    assert np.max(np.abs(out.coords - X)) < 1e-15


def test_rigidity_small_examples():
    rep = rigidity_report(catalog("k3"), {"1": (0, 0), "2": (1, 0), "3": (0.5, math.sqrt(3) / 2)})
    assert (rep.jacobian_rank, rep.flex_count, rep.rigid) == (3, 0, True)
    p3 = Graph.from_edges("abc", [("a", "b"), ("b", "c")])
    rep = rigidity_report(p3, {"a": (0, 0), "b": (1, 0), "c": (1, 1)})
    assert (rep.jacobian_rank, rep.flex_count) == (2, 1)


def test_heawood_minus_edge_flexes():
    from udembed.construct import execute, heawood_plan

    plan = heawood_plan()
    pl = execute(plan)
    g = catalog("heawood_minus_edge")
    rep = rigidity_report(g, pl.coords)
    assert rep.flex_count >= 1


@pytest.mark.parametrize("name", ["k3", "k4_minus_e", "moser_spindle", "k2_3"])
def test_success_implies_verify(name):
    g = catalog(name)
    res = solve(g, SolveOptions(restarts=10))
    if res.success:
        assert verify(g, res.embedding.coords, edge_tol=1e-6, separation_tol=1e-3).passed
