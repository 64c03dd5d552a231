import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ggmle.errors import NotConverged
from ggmle.graphs import Graph
from ggmle.mle import Status, check_duality, fit_coordinate_k, objective
from ggmle.rcon import (ColoredGraph, class_sums, rcon_basis, rcon_dual_check, rcon_fit,
                        read_colored_json)

from conftest import random_pd

C4 = Graph.cycle(4)


def test_colored_graph_validation():
    with pytest.raises(ValueError):
        ColoredGraph(C4, ((0, 1), (2,)), ((e,) for e in C4.edge_list()))
    with pytest.raises(ValueError):
        ColoredGraph(C4, ((0, 1, 2, 3),), (((0, 1),),))
    with pytest.raises(ValueError):
        ColoredGraph(C4, ((0, 1, 2, 3), (0,)), (tuple(C4.edge_list()),))


def test_json_round_trip(tmp_path):
    CG = ColoredGraph(C4, ((0, 2), (1, 3)), (((0, 1), (2, 3)), ((1, 2), (0, 3))))
    path = tmp_path / "cg.json"
    path.write_text(json.dumps(CG.to_json()))
    assert read_colored_json(path) == CG


def test_basis_examples():
    G = Graph.grid(2, 3)
    assert len(rcon_basis(ColoredGraph.uncolored(G))) == G.p + G.n_edges
    I, A = rcon_basis(ColoredGraph.single_color(C4))
    np.testing.assert_array_equal(I, np.eye(4))
    np.testing.assert_array_equal(A, C4.adjacency_matrix())
    B = rcon_basis(ColoredGraph.uncolored(G))
    gram = np.einsum("mij,nij->mn", B, B)
    assert np.count_nonzero(gram - np.diag(np.diag(gram))) == 0


def test_uncolored_matches_ips(rng):
    for G in [C4, Graph.grid(3), Graph.cycle(6)]:
        S = random_pd(rng, G.p)
        a = rcon_fit(ColoredGraph.uncolored(G), S)
        b = fit_coordinate_k(G, S, eps=1e-12)
        assert np.max(np.abs(a.k_hat - b.k_hat)) <= 1e-6
        rep = rcon_dual_check(a, ColoredGraph.uncolored(G), S)
        dual = check_duality(b, G, S)
        assert max(rep.vertex_class_residual, rep.edge_class_residual) <= 1e-8
        assert dual.fiber_residual <= 1e-8


def test_single_sample_colored_cycle():
    rng = np.random.default_rng(0)
    CG = ColoredGraph.single_color(C4)
    for _ in range(20):
        x = rng.standard_normal(4)
        S = np.outer(x, x)
        res = rcon_fit(CG, S)
        assert res.converged
        rep = rcon_dual_check(res, CG, S, tol=1e-6)
        assert rep.passed


def test_identity_statistic():
    for CG in [ColoredGraph.single_color(C4), ColoredGraph.uncolored(Graph.grid(3)),
               ColoredGraph(C4, ((0, 2), (1, 3)), (((0, 1), (2, 3)), ((1, 2), (0, 3))))]:
        res = rcon_fit(CG, np.eye(CG.graph.p))
        assert res.iterations == 0
        np.testing.assert_allclose(res.k_hat, np.eye(CG.graph.p))


def test_khat_in_colored_subspace(rng):
    CG = ColoredGraph(C4, ((0, 2), (1, 3)), (((0, 1), (2, 3)), ((1, 2), (0, 3))))
    res = rcon_fit(CG, random_pd(rng, 4))
    K = res.k_hat
    assert K[0, 0] == K[2, 2] and K[1, 1] == K[3, 3]
    assert K[0, 1] == K[2, 3] and K[1, 2] == K[0, 3]
    assert K[0, 2] == 0.0 and K[1, 3] == 0.0


@given(st.integers(0, 2**32 - 1))
def test_relaxation_property(seed):
    rng = np.random.default_rng(seed)
    G = Graph.cycle(5)
    S = random_pd(rng, 5, n=8)
    plain = rcon_fit(ColoredGraph.uncolored(G), S)
    if not plain.converged:
        return
    for CG in [ColoredGraph.single_color(G),
               ColoredGraph(G, ((0, 1, 2), (3, 4)), tuple((e,) for e in G.edge_list()))]:
        colored = rcon_fit(CG, S)
        assert colored.converged
        assert colored.loglik <= plain.loglik + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    CG = ColoredGraph.single_color(Graph.cycle(5))
    basis = rcon_basis(CG)
    S = random_pd(rng, 5)
    gamma = np.array([rng.uniform(2.0, 4.0), rng.uniform(-0.5, 0.5)])
    K = sum(g * B for g, B in zip(gamma, basis))
    Sigma = np.linalg.inv(K)
    h = 1e-6
    for m, B in enumerate(basis):
        analytic = np.sum(Sigma * B) - np.sum(S * B)
        numeric = (objective(K + h * B, S) - objective(K - h * B, S)) / (2 * h)
        assert analytic == pytest.approx(numeric, abs=1e-5)


def test_class_sums():
    CG = ColoredGraph(C4, ((0, 2), (1, 3)), (((0, 1), (2, 3)), ((1, 2), (0, 3))))
    M = np.arange(16.0).reshape(4, 4)
    np.testing.assert_array_equal(class_sums(M, CG), [0 + 10, 5 + 15, 1 + 11, 6 + 3])


def test_dual_check_requires_convergence():
    x = np.array([1.0, 2.0, 0.5, -1.0])
    res = rcon_fit(ColoredGraph.uncolored(C4), np.outer(x, x))
    assert res.status is Status.NONEXISTENT
    with pytest.raises(NotConverged):
        rcon_dual_check(res, ColoredGraph.uncolored(C4), np.outer(x, x))
