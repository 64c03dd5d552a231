"""Learning the graph: partial-correlation tests, stepwise search, thresholding, glasso."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import InsufficientSamples, IterationCapExceeded, NotPositiveDefinite, OutOfRange
from .gaussian import partial_correlation
from .graphs import Graph
from .linalg import invert_pd, is_positive_definite, log_det_pd
from .mle import MleResult, fit


def fisher_z(rho: float) -> float:
    """Fisher's variance-stabilising transform ``atanh(rho)``."""
    if not -1.0 < rho < 1.0:
        raise OutOfRange(f"correlation must lie in (-1, 1), got {rho}")
    return math.atanh(rho)


@dataclass(frozen=True)
class CITest:
    reject: bool
    stat: float
    p_value: float


def ci_test_full(S, n: int, i: int, j: int, alpha: float = 0.05) -> CITest:
    """Two-sided z-test of a zero partial correlation given all other variables.

    The statistic is ``sqrt(n - p - 1) * |atanh(r)|`` where ``r`` is the
    sample partial correlation of ``i`` and ``j`` given the remaining
    ``p - 2`` variables.
    """
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    dof = n - p - 1
    if dof <= 0:
        raise InsufficientSamples(f"need n > p + 1, got n={n}, p={p}")
    rest = [v for v in range(p) if v not in (i, j)]
    if rest and not is_positive_definite(S[np.ix_(rest, rest)]):
        raise NotPositiveDefinite("conditioning block of S is singular")
    r = partial_correlation(S, i, j, rest)
    r = min(max(r, -1.0 + 1e-16), 1.0 - 1e-16)
    stat = math.sqrt(dof) * abs(fisher_z(r))
    crit = norm.ppf(1.0 - alpha / 2.0)
    return CITest(reject=stat > crit, stat=stat, p_value=float(2.0 * norm.sf(stat)))


def test_select(S, n: int, alpha: float = 0.05) -> Graph:
    """Keep exactly the edges whose zero-partial-correlation test rejects."""
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    keep = [(i, j) for i in range(p) for j in range(i + 1, p)
            if ci_test_full(S, n, i, j, alpha).reject]
    return Graph.from_edges(p, keep)


test_select.__test__ = False  # not a pytest test


def threshold_select(S, tau: float) -> Graph:
    """Edges whose full partial correlation exceeds ``tau`` in absolute value."""
    if tau < 0:
        raise OutOfRange("tau must be non-negative")
    K = invert_pd(np.asarray(S, dtype=float))
    d = np.sqrt(np.diag(K))
    pc = np.abs(K) / np.outer(d, d)
    p = K.shape[0]
    return Graph.from_edges(p, [(i, j) for i in range(p) for j in range(i + 1, p)
                                if pc[i, j] > tau])


# ---------------------------------------------------------------------------
# stepwise search


@dataclass
class SelectionResult:
    graph: Graph
    score: float
    criterion: str
    lam: float
    trace: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "edges": [[i + 1, j + 1] for i, j in self.graph.edge_list()],
            "criterion": self.criterion,
            "lambda": self.lam,
            "score": self.score,
            "trace": [{"edge": [e[0] + 1, e[1] + 1], "action": a, "score": s}
                      for e, a, s in self.trace],
        }


def penalised_score(result: MleResult, n: int, lam: float, n_edges: int) -> float:
    """``-2 l + lam |E|`` with ``l = n/2 (log det K - tr(S K))``."""
    return -n * result.loglik + lam * n_edges


def score_graph(G: Graph, S, n: int, lam: float) -> float:
    res = fit(G, S)
    if not res.converged:
        return math.inf
    return penalised_score(res, n, lam, G.n_edges)


def _resolve_lambda(criterion: str | None, lam: float | None, n: int) -> tuple[str, float]:
    if lam is not None:
        return (criterion or "custom"), float(lam)
    criterion = (criterion or "bic").lower()
    if criterion == "aic":
        return "aic", 2.0
    if criterion == "bic":
        return "bic", math.log(n)
    raise ValueError(f"unknown criterion {criterion!r}")


def stepwise_select(S, n: int, direction: str = "forward", lam: float | None = None,
                    criterion: str | None = None, best_first: bool = False) -> SelectionResult:
    """Greedy edge search minimising ``-2 l + lam |E|``.

    Forward search starts from the empty graph and adds edges, backward search
    starts from the complete graph and removes them.  By default each sweep
    walks the candidate edges in lexicographic order and applies every change
    that strictly lowers the score; ``best_first=True`` instead applies only
    the single best change per sweep.  Candidates whose MLE does not exist are
    skipped and noted in the trace.  ``lam`` defaults to ``log n`` (BIC).
    """
    S = np.asarray(S, dtype=float)
    if not is_positive_definite(S):
        raise NotPositiveDefinite("stepwise search needs a positive definite S")
    if n < 1:
        raise InsufficientSamples("n must be at least 1")
    criterion, lam = _resolve_lambda(criterion, lam, n)
    p = S.shape[0]
    if direction == "forward":
        G = Graph.empty(p)
    elif direction == "backward":
        G = Graph.complete(p)
    else:
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    action = "add" if direction == "forward" else "remove"
    current = score_graph(G, S, n, lam)
    trace = []
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]

    def candidate(G, e):
        if direction == "forward":
            return None if G.has_edge(*e) else G.with_edges([e])
        return G.without_edges([e]) if G.has_edge(*e) else None

    changed = True
    while changed:
        changed = False
        best = None
        for e in pairs:
            H = candidate(G, e)
            if H is None:
                continue
            s = score_graph(H, S, n, lam)
            if math.isinf(s):
                trace.append((e, "skipped", s))
                continue
            if best_first:
                if s < current and (best is None or s < best[2]):
                    best = (H, e, s)
            elif s < current:
                G, current = H, s
                trace.append((e, action, s))
                changed = True
        if best_first and best is not None:
            G, current = best[0], best[2]
            trace.append((best[1], action, best[2]))
            changed = True
    return SelectionResult(graph=G, score=score_graph(G, S, n, lam), criterion=criterion,
                           lam=lam, trace=trace)


# ---------------------------------------------------------------------------
# l1-penalised likelihood


def glasso_objective(K: np.ndarray, S: np.ndarray, lam: float) -> float:
    off = np.abs(K).sum() - np.abs(np.diag(K)).sum()
    return log_det_pd(K) - float(np.sum(S * K)) - lam * off


def _soft_offdiag(M: np.ndarray, thresh: float) -> np.ndarray:
    out = np.sign(M) * np.maximum(np.abs(M) - thresh, 0.0)
    np.fill_diagonal(out, np.diag(M))
    return out


@dataclass
class GlassoInfo:
    iterations: int
    objective_trace: list


def glasso_fit(S, lam: float, eps: float = 1e-15, max_iter: int = 10_000,
               return_info: bool = False):
    """Maximise ``log det K - tr(S K) - lam * sum_{i != j} |K_ij|`` by proximal gradient.

    Starts at ``diag(1 / S_ii)``.  Each step soft-thresholds the off-diagonal
    entries of ``K + t (inv(K) - S)``; the step ``t`` starts from a
    Barzilai-Borwein guess and is halved until the iterate is positive
    definite and the quadratic-model ascent condition holds, so the penalised
    objective never decreases.  Stops when the relative objective change drops
    below ``eps``; the objective is flat near the optimum (the change is
    quadratic in the distance), so ``eps`` has to be close to machine
    precision for an accurate ``K``.
    """
    S = np.asarray(S, dtype=float)
    if lam < 0:
        raise OutOfRange("lambda must be non-negative")
    if not np.all(np.diag(S) > 0):
        raise NotPositiveDefinite("diagonal of S must be strictly positive")
    K = np.diag(1.0 / np.diag(S))
    sigma = invert_pd(K)
    grad = sigma - S
    smooth = log_det_pd(K) - float(np.sum(S * K))
    obj = glasso_objective(K, S, lam)
    trace = [obj]
    t = float(np.min(np.diag(K))) ** 2
    for it in range(1, max_iter + 1):
        while True:
            K_new = _soft_offdiag(K + t * grad, t * lam)
            K_new = (K_new + K_new.T) / 2.0
            if is_positive_definite(K_new, 0.0):
                D = K_new - K
                smooth_new = log_det_pd(K_new) - float(np.sum(S * K_new))
                if smooth_new >= smooth + float(np.sum(grad * D)) - float(np.sum(D * D)) / (2 * t):
                    break
            t /= 2.0
            if t < 1e-20:
                raise NotPositiveDefinite("no step keeps the iterate positive definite")
        sigma_new = invert_pd(K_new)
        grad_new = sigma_new - S
        obj_new = smooth_new - lam * (np.abs(K_new).sum() - np.abs(np.diag(K_new)).sum())
        trace.append(obj_new)
        dK, dG = K_new - K, grad_new - grad
        K, grad, smooth = K_new, grad_new, smooth_new
        done = abs(obj_new - obj) <= eps * max(1.0, abs(obj))
        obj = obj_new
        if done or not np.any(dK):
            info = GlassoInfo(it, trace)
            return (K, info) if return_info else K
        curv = -float(np.sum(dK * dG))
        t = float(np.sum(dK * dK)) / curv if curv > 0 else 2.0 * t
        t = min(max(t, 1e-12), 1e12)
    raise IterationCapExceeded(f"glasso did not converge in {max_iter} iterations")
