import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ggmle.errors import InsufficientSamples, NotPositiveDefinite, OutOfRange
from ggmle.gaussian import GaussianParams, sample, sufficient_stats
from ggmle.graphs import Graph
from ggmle.mle import fit
from ggmle.select import (ci_test_full, fisher_z, glasso_fit, glasso_objective,
                          stepwise_select, test_select, threshold_select)

from conftest import random_pd

PATH_K = np.array([[2.0, -0.8, 0.0], [-0.8, 2.0, -0.8], [0.0, -0.8, 2.0]])


def path_stats(seed, n):
    X = sample(GaussianParams(np.zeros(3), np.linalg.inv(PATH_K)), n, seed=seed)
    return sufficient_stats(X).cov


# -- Fisher z ---------------------------------------------------------------


def test_fisher_z_examples():
    assert fisher_z(0.0) == 0.0
    assert fisher_z(0.5) == pytest.approx(0.5 * math.log(3.0), rel=1e-14)
    with pytest.raises(OutOfRange):
        fisher_z(1.0)
    with pytest.raises(OutOfRange):
        fisher_z(-1.5)


@given(st.floats(-0.999, 0.999))
def test_fisher_z_properties(r):
    assert fisher_z(-r) == -fisher_z(r)
    assert math.tanh(fisher_z(r)) == pytest.approx(r, abs=1e-12)


def _with_partial_correlation(rho):
    # 4 variables; the pair (0, 1) has partial correlation rho given {2, 3}
    K = np.eye(4)
    K[0, 1] = K[1, 0] = -rho
    return np.linalg.inv(K)


def test_ci_test_plug_in():
    S = _with_partial_correlation(0.3)
    res = ci_test_full(S, 103, 0, 1)
    assert res.stat == pytest.approx(math.sqrt(98) * math.atanh(0.3), rel=1e-12)
    assert res.reject
    assert res.p_value == pytest.approx(2 * (1 - 0.5 * (1 + math.erf(res.stat / math.sqrt(2)))))


def test_ci_test_zero_never_rejects():
    res = ci_test_full(np.eye(4), 50, 0, 1)
    assert res.stat == 0.0 and not res.reject and res.p_value == pytest.approx(1.0)


def test_ci_test_errors():
    with pytest.raises(InsufficientSamples):
        ci_test_full(np.eye(4), 5, 0, 1)
    S = np.eye(4)
    S[2, 3] = S[3, 2] = 1.0
    with pytest.raises(NotPositiveDefinite):
        ci_test_full(S, 50, 0, 1)


def test_test_select_recovers_path():
    S = path_stats(0, 2000)
    assert test_select(S, 2000).edge_list() == [(0, 1), (1, 2)]


# -- stepwise ---------------------------------------------------------------


def test_stepwise_diagonal_truth_forward():
    empty = 0
    for seed in range(20):
        X = sample(GaussianParams(np.zeros(4), np.diag([1.0, 2.0, 0.5, 1.0])), 1000, seed=seed)
        empty += stepwise_select(sufficient_stats(X).cov, 1000).graph.n_edges == 0
    assert empty >= 18


@pytest.mark.parametrize("direction,best_first", [("backward", False), ("forward", True)])
def test_stepwise_recovers_path(direction, best_first):
    hits = sum(stepwise_select(path_stats(seed, 1000), 1000, direction=direction,
                               best_first=best_first).graph == Graph.path(3)
               for seed in range(100))
    assert hits >= 90


def test_forward_first_improvement_overshoots_on_path():
    # vertices 1 and 3 are marginally correlated, so the lexicographic forward
    # pass adds (1, 3) before it has seen (2, 3) and can never remove it again
    res = stepwise_select(path_stats(0, 1000), 1000)
    assert res.graph == Graph.complete(3)


def test_stepwise_lambda_zero_backward_keeps_complete(rng):
    S = random_pd(rng, 4)
    res = stepwise_select(S, 50, direction="backward", lam=0.0)
    assert res.graph == Graph.complete(4)
    assert res.trace == []


def test_stepwise_trace_and_final_score(rng):
    S = random_pd(rng, 5, n=30)
    for direction in ("forward", "backward"):
        for best_first in (False, True):
            res = stepwise_select(S, 30, direction=direction, best_first=best_first)
            scores = [s for _, a, s in res.trace if a != "skipped"]
            assert all(b < a for a, b in zip(scores, scores[1:]))
            ref = fit(res.graph, S)
            assert res.score == pytest.approx(-30 * ref.loglik + math.log(30) * res.graph.n_edges,
                                              rel=1e-9)


def test_stepwise_criteria(rng):
    S = random_pd(rng, 3)
    assert stepwise_select(S, 40, criterion="aic").lam == 2.0
    assert stepwise_select(S, 40).lam == pytest.approx(math.log(40))
    with pytest.raises(ValueError):
        stepwise_select(S, 40, direction="sideways")
    with pytest.raises(NotPositiveDefinite):
        stepwise_select(np.zeros((3, 3)), 40)


# -- thresholding -----------------------------------------------------------


def test_threshold_examples(rng):
    S = random_pd(rng, 4)
    assert threshold_select(S, 0.0) == Graph.complete(4)
    assert threshold_select(S, 1.0).n_edges == 0
    S = np.linalg.inv(PATH_K)
    for tau in (1e-9, 0.1, 0.3):
        assert not threshold_select(S, tau).has_edge(0, 2)


@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1))
def test_threshold_monotone(seed, a, b):
    S = random_pd(np.random.default_rng(seed), 5)
    lo, hi = min(a, b), max(a, b)
    assert threshold_select(S, hi).edges <= threshold_select(S, lo).edges


# -- glasso -----------------------------------------------------------------


def test_glasso_lambda_zero(rng):
    S = random_pd(rng, 6)
    K = glasso_fit(S, 0.0)
    assert np.max(np.abs(K - np.linalg.inv(S))) <= 1e-5
    assert np.max(np.abs(K @ S - np.eye(6))) <= 1e-4


def test_glasso_large_lambda_is_diagonal(rng):
    S = random_pd(rng, 6)
    lam = np.max(np.abs(S - np.diag(np.diag(S))))
    K = glasso_fit(S, lam)
    off = ~np.eye(6, dtype=bool)
    assert np.all(K[off] == 0.0)
    np.testing.assert_allclose(np.diag(K), 1.0 / np.diag(S), rtol=1e-14)
    # subgradient check of the diagonal candidate
    grad = np.linalg.inv(K) - S
    assert np.all(np.abs(grad[off]) <= lam + 1e-15)


def test_glasso_objective_monotone(rng):
    S = random_pd(rng, 8, n=10)
    K, info = glasso_fit(S, 0.05, return_info=True)
    tr = np.asarray(info.objective_trace)
    assert np.all(np.diff(tr) >= -1e-12 * np.abs(tr[1:]))
    assert tr[-1] == pytest.approx(glasso_objective(K, S, 0.05))


def test_glasso_optimality(rng):
    # KKT: grad_ij = lam * sign(K_ij) on the support, |grad_ij| <= lam off it
    S = random_pd(rng, 6, n=12)
    lam = 0.1
    K = glasso_fit(S, lam, eps=1e-14)
    G = np.linalg.inv(K) - S
    off = ~np.eye(6, dtype=bool)
    nz = off & (K != 0)
    np.testing.assert_allclose(G[nz], lam * np.sign(K[nz]), atol=1e-5)
    assert np.all(np.abs(G[off & (K == 0)]) <= lam + 1e-6)
    np.testing.assert_allclose(np.diag(G), 0.0, atol=1e-5)


def test_glasso_recovers_path_support():
    hits = 0
    for seed in range(100):
        K = glasso_fit(path_stats(seed, 500), 0.05)
        hits += K[0, 1] != 0 and K[1, 2] != 0
    assert hits >= 90


def test_glasso_errors():
    with pytest.raises(OutOfRange):
        glasso_fit(np.eye(2), -1.0)
    with pytest.raises(NotPositiveDefinite):
        glasso_fit(np.zeros((2, 2)), 0.1)
