"""Maximum likelihood estimation in Gaussian graphical models.

Three estimators share one result type:

* :func:`fit_coordinate_sigma` cycles through the missing edges and sets each
  covariance entry to the value that maximises ``log det``; the concentration
  matrix then has zeros off the graph.
* :func:`fit_coordinate_k` (iterative proportional scaling) cycles through
  edges and diagonal entries of the concentration matrix, forcing the matching
  covariance blocks to equal the sample covariance.  It also detects an
  unbounded likelihood, i.e. a non-existent MLE.
* :func:`fit_chordal_closed_form` evaluates the clique/separator formula for
  chordal graphs.

The statistic ``S`` may be a full symmetric matrix or a
:class:`~ggmle.completion.PartialMatrix`; only entries on the graph and the
diagonal are ever read.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .completion import (PartialMatrix, clique_feasible, cycle_slack, BOUNDARY_MARGIN)
from .errors import NotChordal, NotConverged, NotPositiveDefinite
from .graphs import Graph, clique_decomposition, is_chordal
from .linalg import invert_pd, is_positive_definite, log_det_pd

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-9
DEFAULT_MAX_ITER = 10_000
# squared Newton decrement below which a small-gradient Newton iterate counts as converged
DECREMENT_TOL = 1e-6


class Status(str, Enum):
    CONVERGED = "converged"
    NONEXISTENT = "nonexistent"
    ITERATION_CAP = "iteration_cap"


@dataclass
class MleResult:
    sigma_hat: np.ndarray | None
    k_hat: np.ndarray | None
    loglik: float | None
    iterations: int
    status: Status
    max_fiber_residual: float = float("nan")
    max_zero_residual: float = float("nan")
    method: str = ""
    detail: str = ""
    objective_trace: list = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_dict(self) -> dict:
        ok = self.converged

        def mat(M):
            return None if (M is None or not ok) else np.asarray(M).tolist()

        return {
            "status": self.status.value,
            "sigma_hat": mat(self.sigma_hat),
            "k_hat": mat(self.k_hat),
            "loglik": self.loglik if ok else None,
            "iterations": self.iterations,
            "fiber_residual": self.max_fiber_residual if ok else None,
            "zero_residual": self.max_zero_residual if ok else None,
            "method": self.method,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# helpers


def model_statistic(G: Graph, S) -> np.ndarray:
    """``S`` restricted to ``E*`` as a dense array with zeros elsewhere."""
    mask = G.support_mask()
    if isinstance(S, PartialMatrix):
        if S.p != G.p:
            raise ValueError("partial matrix and graph sizes differ")
        vals = S.values
    else:
        vals = np.asarray(S, dtype=float)
        if vals.shape != (G.p, G.p):
            raise ValueError(f"statistic has shape {vals.shape}, graph has p={G.p}")
    if not np.all(np.isfinite(vals[mask])):
        raise ValueError("statistic must be specified on every edge and the diagonal")
    out = np.where(mask, vals, 0.0)
    return (out + out.T) / 2.0


def fiber_residual(sigma: np.ndarray, S_G: np.ndarray, mask: np.ndarray) -> float:
    return float(np.max(np.abs(sigma - S_G)[mask]))


def zero_residual(K: np.ndarray, mask: np.ndarray) -> float:
    off = ~mask
    return float(np.max(np.abs(K[off]))) if off.any() else 0.0


def objective(K: np.ndarray, S_G: np.ndarray) -> float:
    """``log det K - tr(S K)``; ``S_G`` only needs to be right on the support of K."""
    return log_det_pd(K) - float(np.sum(S_G * K))


def _support_blocks(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    us, vs = [], []
    for i, j in G.augmented_edges():
        us.append(i)
        vs.append(-1 if i == j else j)
    return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)


def _degenerate_block(G: Graph, S_G: np.ndarray) -> str | None:
    for i in range(G.p):
        if not S_G[i, i] > 0.0:
            return f"diagonal entry {i + 1} is not positive"
    for i, j in G.edge_list():
        block = S_G[np.ix_([i, j], [i, j])]
        if not is_positive_definite(block):
            return f"edge block ({i + 1},{j + 1}) is not positive definite"
    return None


def _finish(G, S_G, K, sigma, iterations, status, method, detail="", trace=None):
    mask = G.support_mask()
    res = MleResult(sigma_hat=sigma, k_hat=K, loglik=None, iterations=iterations,
                    status=status, method=method, detail=detail,
                    objective_trace=trace or [])
    if status is Status.CONVERGED:
        res.loglik = objective(K, S_G)
        res.max_fiber_residual = fiber_residual(sigma, S_G, mask)
        res.max_zero_residual = zero_residual(K, mask) if method != "sigma" \
            else zero_residual(invert_pd(sigma), mask)
    return res


# ---------------------------------------------------------------------------
# estimators


def fit_coordinate_sigma(G: Graph, S, eps: float = DEFAULT_EPS,
                         max_iter: int = DEFAULT_MAX_ITER) -> MleResult:
    """Coordinate ascent on the covariance entries outside ``E*``.

    Starts from ``S`` itself, which therefore has to be positive definite.
    Stops when a full sweep changes ``Sigma`` by less than ``eps`` in the
    entrywise 1-norm.
    """
    S = np.asarray(S, dtype=float)
    if not is_positive_definite(S):
        raise NotPositiveDefinite("coordinate ascent on Sigma needs a positive definite S; "
                                  "use fit_coordinate_k")
    pairs = G.non_edges()
    us = np.asarray([u for u, _ in pairs], dtype=np.int64)
    vs = np.asarray([v for _, v in pairs], dtype=np.int64)
    sigma = (S + S.T) / 2.0
    iterations = 0
    status = Status.CONVERGED
    while pairs:
        if iterations >= max_iter:
            status = Status.ITERATION_CAP
            break
        iterations += 1
        prev = sigma.copy()
        K = invert_pd(sigma)
        if not _kernels.sigma_sweep(sigma, K, us, vs):
            raise NotPositiveDefinite("covariance iterate lost positive definiteness")
        sigma = (sigma + sigma.T) / 2.0
        if np.sum(np.abs(sigma - prev)) < eps:
            break
    K = invert_pd(sigma)
    S_G = model_statistic(G, S)
    return _finish(G, S_G, K, sigma, iterations, status, "sigma")


def fit_coordinate_k(G: Graph, S, eps: float = DEFAULT_EPS, max_iter: int = DEFAULT_MAX_ITER,
                     divergence_bound: float | None = None, start=None,
                     objective_ceiling: float | None = None) -> MleResult:
    """Iterative proportional scaling on the concentration matrix.

    Each step updates the 2x2 block of ``K`` for an edge (or the single
    diagonal entry for a vertex) so that the corresponding block of
    ``inv(K)`` equals that of ``S``.  Sweeps follow lexicographic order of
    ``E*``; the loop stops when a sweep moves ``K`` by less than ``eps``.

    Non-existence is reported (``Status.NONEXISTENT``) when

    * a diagonal entry or edge block of ``S`` is not positive definite,
    * an iterate ``K`` is positive definite with ``<S, K> <= 0``, which
      certifies that no positive definite completion of ``S_G`` exists,
    * ``max |K_ij|`` exceeds ``divergence_bound`` (default
      ``1e8 * max(1, max_i 1/S_ii)``), or
    * with ``objective_ceiling`` set, the objective stays above it for ten
      sweeps in a row without the fiber residual shrinking.
    """
    S_G = model_statistic(G, S)
    mask = G.support_mask()
    bad = _degenerate_block(G, S_G)
    if bad is not None:
        return _finish(G, S_G, None, None, 0, Status.NONEXISTENT, "k", bad)
    if divergence_bound is None:
        divergence_bound = 1e8 * max(1.0, float(np.max(1.0 / np.diag(S_G))))
    if start is None:
        K = np.eye(G.p)
    else:
        K = np.array(start, dtype=float)
        if np.any(K[~mask] != 0.0) or not is_positive_definite(K):
            raise ValueError("start must be positive definite and supported on E*")
    us, vs = _support_blocks(G)
    S_c = np.ascontiguousarray(S_G)
    trace = [objective(K, S_G)]
    stall = 0
    last_resid = np.inf
    for it in range(1, max_iter + 1):
        try:
            sigma = invert_pd(K)
        except NotPositiveDefinite:
            return _finish(G, S_G, K, None, it, Status.NONEXISTENT, "k",
                           "concentration iterate degenerated while diverging", trace)
        prev = K.copy()
        _kernels.k_sweep(K, sigma, S_c, us, vs)
        K = np.where(mask, (K + K.T) / 2.0, 0.0)
        if not is_positive_definite(K, 0.0):
            return _finish(G, S_G, K, None, it, Status.NONEXISTENT, "k",
                           "concentration iterate degenerated while diverging", trace)
        f = objective(K, S_G)
        if f < trace[-1] - 1e-9 * max(1.0, abs(f)):
            log.warning("objective decreased at sweep %d: %.17g -> %.17g", it, trace[-1], f)
        trace.append(f)
        pairing = float(np.sum(S_G * K))
        if pairing <= 0.0:
            return _finish(G, S_G, K, None, it, Status.NONEXISTENT, "k",
                           f"certificate: positive definite K with <S,K> = {pairing:.3g}",
                           trace)
        kmax = float(np.max(np.abs(K)))
        if kmax > divergence_bound:
            return _finish(G, S_G, K, None, it, Status.NONEXISTENT, "k",
                           f"max |K_ij| = {kmax:.3g} exceeded the divergence bound", trace)
        if np.sum(np.abs(K - prev)) < eps:
            return _finish(G, S_G, K, invert_pd(K), it, Status.CONVERGED, "k", trace=trace)
        if objective_ceiling is not None:
            resid = fiber_residual(sigma, S_G, mask)
            stall = stall + 1 if (f > objective_ceiling and resid >= last_resid) else 0
            last_resid = min(last_resid, resid)
            if stall >= 10:
                return _finish(G, S_G, K, None, it, Status.NONEXISTENT, "k",
                               "objective above ceiling with a stalled fiber residual", trace)
    return _finish(G, S_G, K, None, max_iter, Status.ITERATION_CAP, "k",
                   "sweep limit reached", trace)


def fill(block: np.ndarray, idx, p: int) -> np.ndarray:
    """``p x p`` zero matrix with ``block`` placed at rows/columns ``idx``."""
    out = np.zeros((p, p))
    out[np.ix_(idx, idx)] = block
    return out


def chordal_precision(G: Graph, S_G: np.ndarray) -> np.ndarray | None:
    """Clique-minus-separator sum of inverted blocks; None if a clique block is singular."""
    decomp = clique_decomposition(G)
    K = np.zeros((G.p, G.p))
    for C in decomp.cliques:
        block = S_G[np.ix_(C, C)]
        if not is_positive_definite(block):
            return None
        K[np.ix_(C, C)] += invert_pd(block)
    for B in decomp.separators:
        if B:
            K[np.ix_(B, B)] -= invert_pd(S_G[np.ix_(B, B)])
    return (K + K.T) / 2.0


def fit_chordal_closed_form(G: Graph, S) -> MleResult:
    if not is_chordal(G):
        raise NotChordal("closed form needs a chordal graph")
    S_G = model_statistic(G, S)
    K = chordal_precision(G, S_G)
    if K is None:
        return _finish(G, S_G, None, None, 0, Status.NONEXISTENT, "chordal",
                       "a clique block of S is not positive definite")
    return _finish(G, S_G, K, invert_pd(K), 0, Status.CONVERGED, "chordal")


def fit_hybrid(G: Graph, S, eps: float = DEFAULT_EPS, max_iter: int = DEFAULT_MAX_ITER,
               sweeps: int = 200) -> MleResult:
    """Coordinate ascent on K, finished by Newton steps when it is slow.

    Runs up to ``sweeps`` sweeps of :func:`fit_coordinate_k`.  If those
    neither converge nor detect divergence, damped Newton
    (:func:`fit_linear_concentration` on the edge basis) continues from the
    last iterate for the rest of the ``max_iter`` budget.  Near the boundary
    of the cone of completable statistics the sweeps converge (or diverge)
    slowly while Newton either converges quadratically or pushes ``K`` past
    the divergence bound geometrically.  The Newton stage works on the
    correlation matrix of ``S_G``, so its divergence bound applies to
    ``|K_ij| sqrt(S_ii S_jj)``.
    """
    S_G = model_statistic(G, S)
    res = fit_coordinate_k(G, S_G, eps=eps, max_iter=min(sweeps, max_iter))
    if res.status is not Status.ITERATION_CAP or res.iterations >= max_iter:
        return res
    if not is_positive_definite(res.k_hat, 0.0):
        return res
    # Newton runs on the correlation scale: the problem is equivariant under
    # diagonal scaling and the iterates near the boundary are far better
    # conditioned there
    d = np.sqrt(np.diag(S_G))
    D = np.outer(d, d)
    q = fit_linear_concentration(edge_basis(G), S_G / D, eps=eps / float(np.max(D)),
                                 start=res.k_hat * D, max_iter=max_iter - res.iterations)
    total = res.iterations + q.iterations
    shift = -2.0 * float(np.sum(np.log(d)))
    trace = res.objective_trace + [f + shift for f in q.objective_trace[1:]]
    K = q.k_hat / D
    if q.status is Status.CONVERGED:
        return _finish(G, S_G, K, q.sigma_hat * D, total, Status.CONVERGED, "k+newton",
                       trace=trace)
    return _finish(G, S_G, K, None, total, q.status, "k+newton", q.detail, trace)


def fit(G: Graph, S, method: str = "auto", **kwargs) -> MleResult:
    """Dispatch by ``method``.

    ``auto`` uses the closed form on chordal graphs and :func:`fit_hybrid`
    otherwise; ``chordal``, ``k``, ``sigma`` and ``hybrid`` force one
    estimator.
    """
    if method == "auto":
        method = "chordal" if is_chordal(G) else "hybrid"
    if method == "chordal":
        return fit_chordal_closed_form(G, S)
    if method == "k":
        return fit_coordinate_k(G, S, **kwargs)
    if method == "sigma":
        return fit_coordinate_sigma(G, S, **kwargs)
    if method == "hybrid":
        return fit_hybrid(G, S, **kwargs)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Newton ascent over a linear concentration model


def edge_basis(G: Graph) -> list[np.ndarray]:
    """Indicator basis of the graph subspace: ``E_ii`` per vertex, ``E_ij + E_ji`` per edge."""
    basis = []
    for i, j in G.augmented_edges():
        B = np.zeros((G.p, G.p))
        B[i, j] = B[j, i] = 1.0
        basis.append(B)
    return basis


def fit_linear_concentration(basis, S, eps: float = 1e-10, max_iter: int = 500,
                             divergence_bound: float | None = None, start=None,
                             method: str = "newton") -> MleResult:
    """Maximise ``log det K - tr(S K)`` over ``K = sum_m gamma_m B_m`` by damped Newton.

    ``basis`` must contain matrices whose span meets the positive definite
    cone.  The start must lie in that span (default: least squares fit of the
    identity, which is exact when the diagonal basis elements cover every
    vertex).  While the Newton decrement is at least 1/4, steps are halved
    until ``K`` stays positive definite and the objective rises by an Armijo
    fraction; below that, full steps are taken unless they lower the objective by
    more than roundoff.  Convergence: every gradient
    component ``tr(Sigma B_m) - tr(S B_m)`` is at most ``eps`` in absolute value
    and the squared Newton decrement is at most ``DECREMENT_TOL``.
    Divergence is declared, as for :func:`fit_coordinate_k`, through a
    positive definite iterate with ``<S, K> <= 0`` or ``max |K_ij|`` above
    ``divergence_bound``.
    """
    Bs = np.asarray([np.asarray(B, dtype=float) for B in basis])
    d, p = Bs.shape[0], Bs.shape[1]
    S = np.asarray(S, dtype=float)
    s_vec = np.einsum("ij,mij->m", S, Bs)
    flat = Bs.reshape(d, -1).T
    if start is None:
        start = np.eye(p)
    start = np.asarray(start, dtype=float)
    gram = flat.T @ flat
    if np.count_nonzero(gram - np.diag(np.diag(gram))) == 0 and np.all(np.diag(gram) > 0):
        # disjoint supports (indicator bases): coordinates without roundoff
        gamma = (flat.T @ start.reshape(-1)) / np.diag(gram)
    else:
        gamma, *_ = np.linalg.lstsq(flat, start.reshape(-1), rcond=None)
    K = np.einsum("m,mij->ij", gamma, Bs)
    if not np.allclose(K, start, atol=1e-10) or not is_positive_definite(K):
        raise ValueError("start is not a positive definite point of the model subspace")
    if divergence_bound is None:
        diag = np.diag(S)
        divergence_bound = 1e8 * max(1.0, float(np.max(1.0 / diag))) if np.all(diag > 0) else 1e8

    f = objective(K, S)
    trace = [f]
    for it in range(1, max_iter + 1):
        sigma = invert_pd(K)
        grad = np.einsum("ij,mij->m", sigma, Bs) - s_vec
        SB = np.einsum("ij,mjk,kl->mil", sigma, Bs, sigma)
        H = np.einsum("mij,nji->mn", SB, Bs)
        H = (H + H.T) / 2.0
        # Jacobi scaling: near the boundary the coordinates differ in
        # curvature by many orders of magnitude
        h = np.sqrt(np.maximum(np.diag(H), np.finfo(float).tiny))
        try:
            step = np.linalg.solve(H / np.outer(h, h), grad / h) / h
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        slope = float(grad @ step)
        # a small gradient alone is not enough: when the supremum is only
        # approached at infinity the gradient decays like 1/|K| while the
        # decrement stays of order one
        if np.max(np.abs(grad)) <= eps and slope <= DECREMENT_TOL:
            return MleResult(sigma_hat=sigma, k_hat=K, loglik=f, iterations=it - 1,
                             status=Status.CONVERGED, method=method, objective_trace=trace)
        # -log det is self-concordant: once the Newton decrement sqrt(slope) is
        # below 1/4 full steps stay positive definite and converge
        # quadratically, so the (roundoff-prone) Armijo test is skipped
        damped = slope > 0.0625
        t = 1.0
        while True:
            K_new = K + t * np.einsum("m,mij->ij", step, Bs)
            if is_positive_definite(K_new, 0.0):
                f_new = objective(K_new, S)
                if damped:
                    ok = f_new >= f + 0.25 * t * slope
                else:
                    # guard against a Hessian spoilt by ill conditioning
                    ok = f_new >= f - 1e-12 * max(1.0, abs(f), float(np.sum(np.abs(S * K))))
                if ok:
                    break
            t /= 2.0
            if t < 1e-14:
                return MleResult(sigma_hat=None, k_hat=K, loglik=None, iterations=it,
                                 status=Status.ITERATION_CAP, method=method,
                                 detail="line search failed", objective_trace=trace)
        K, f = (K_new + K_new.T) / 2.0, f_new
        trace.append(f)
        pairing = float(np.sum(S * K))
        if pairing <= 0.0:
            return MleResult(sigma_hat=None, k_hat=K, loglik=None, iterations=it,
                             status=Status.NONEXISTENT, method=method,
                             detail=f"certificate: positive definite K with <S,K> = {pairing:.3g}",
                             objective_trace=trace)
        kmax = float(np.max(np.abs(K)))
        if kmax > divergence_bound:
            return MleResult(sigma_hat=None, k_hat=K, loglik=None, iterations=it,
                             status=Status.NONEXISTENT, method=method,
                             detail=f"max |K_ij| = {kmax:.3g} exceeded the divergence bound",
                             objective_trace=trace)
    return MleResult(sigma_hat=None, k_hat=K, loglik=None, iterations=max_iter,
                     status=Status.ITERATION_CAP, method=method,
                     detail="iteration limit reached", objective_trace=trace)


# ---------------------------------------------------------------------------
# existence


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool | None
    method: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"exists": self.exists, "method": self.method, "detail": self.detail}


def cycle_angles(G: Graph, S) -> np.ndarray:
    """Angles ``arccos`` of the edge correlations, walked around a cycle graph."""
    order = G.cycle_order()
    if order is None:
        raise ValueError("graph is not a cycle")
    S_G = model_statistic(G, S)
    d = np.sqrt(np.diag(S_G))
    nxt = order[1:] + order[:1]
    corr = np.array([S_G[a, b] / (d[a] * d[b]) for a, b in zip(order, nxt)])
    return np.arccos(np.clip(corr, -1.0, 1.0))


def mle_exists(G: Graph, S, strategy: str = "auto", *, eps: float = 1e-8,
               probe_sweeps: int = 200, newton_iter: int = 500) -> ExistenceVerdict:
    """Decide whether the MLE exists for statistic ``S`` on graph ``G``.

    ``auto`` uses clique blocks on chordal graphs, the odd-subset angle
    inequalities on cycles and a divergence probe otherwise.  The probe runs
    ``probe_sweeps`` sweeps of :func:`fit_coordinate_k` and, if those neither
    converge nor diverge, continues with Newton steps
    (:func:`fit_linear_concentration`), which either converge quadratically or
    push ``K`` past the divergence bound geometrically.  ``exists`` is None
    only when both stages run out of iterations.
    """
    if strategy == "auto":
        if is_chordal(G):
            strategy = "chordal"
        elif G.cycle_order() is not None:
            strategy = "cycle"
        else:
            strategy = "divergence"
    S_G = model_statistic(G, S)
    if strategy == "chordal":
        if not is_chordal(G):
            raise NotChordal("chordal strategy on a non-chordal graph")
        ok = clique_feasible(PartialMatrix.from_matrix(S_G, G))
        return ExistenceVerdict(ok, "CliqueChordal",
                                "all clique blocks positive definite" if ok
                                else "a clique block is not positive definite")
    if strategy == "cycle":
        bad = _degenerate_block(G, S_G)
        if bad is not None:
            return ExistenceVerdict(False, "CycleAngles", bad)
        slack = cycle_slack(cycle_angles(G, S_G))
        ok = slack > BOUNDARY_MARGIN
        return ExistenceVerdict(ok, "CycleAngles", f"minimum odd-subset slack {slack:.6g}")
    if strategy == "divergence":
        res = fit_hybrid(G, S_G, eps=eps, max_iter=probe_sweeps + newton_iter,
                         sweeps=probe_sweeps)
        if res.status is Status.CONVERGED:
            return ExistenceVerdict(True, "Divergence",
                                    f"{res.method} ascent converged in {res.iterations} steps")
        if res.status is Status.NONEXISTENT:
            return ExistenceVerdict(False, "Divergence", res.detail)
        return ExistenceVerdict(None, "Divergence", "probe hit its iteration limit")
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class DualityReport:
    fiber_residual: float
    zero_residual: float
    inverse_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.fiber_residual, self.zero_residual, self.inverse_residual) <= self.tol

    def to_dict(self) -> dict:
        return {"fiber_residual": self.fiber_residual, "zero_residual": self.zero_residual,
                "inverse_residual": self.inverse_residual, "tol": self.tol,
                "passed": self.passed}


def check_duality(result: MleResult, G: Graph, S, tol: float = 1e-6) -> DualityReport:
    """Residuals of the fiber constraint, the zero pattern of K and ``Sigma K = I``."""
    if not result.converged:
        raise NotConverged(f"fit status is {result.status.value}")
    mask = G.support_mask()
    S_G = model_statistic(G, S)
    sigma, K = result.sigma_hat, result.k_hat
    return DualityReport(
        fiber_residual=fiber_residual(sigma, S_G, mask),
        zero_residual=zero_residual(K, mask),
        inverse_residual=float(np.max(np.abs(sigma @ K - np.eye(G.p)))),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# maximum likelihood threshold experiments


@dataclass(frozen=True)
class MltReport:
    n: int
    trials: int
    exists_count: int
    unknown_count: int

    @property
    def exists_fraction(self) -> float:
        return self.exists_count / self.trials

    def to_dict(self) -> dict:
        return {"n": self.n, "trials": self.trials, "exists_fraction": self.exists_fraction,
                "unknown_count": self.unknown_count}


def monte_carlo_statistic(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sample covariance of ``n`` standard normal draws.

    Raw second moment (known zero mean) when ``n <= p`` so that the rank is
    ``n``; mean-centred otherwise.
    """
    X = rng.standard_normal((n, p))
    if n > p:
        X = X - X.mean(axis=0)
    S = X.T @ X / n
    return (S + S.T) / 2.0


def mlt_monte_carlo(G: Graph, n: int, trials: int, seed: int = 0,
                    strategy: str = "auto") -> MltReport:
    """Fraction of ``trials`` random datasets of size ``n`` for which the MLE exists.

    Trial ``t`` uses the ``t``-th child of ``SeedSequence(seed)``, so results do
    not depend on the order in which trials run.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    exists = unknown = 0
    for child in children:
        S = monte_carlo_statistic(G.p, n, np.random.default_rng(child))
        verdict = mle_exists(G, S, strategy)
        if verdict.exists is None:
            unknown += 1
        elif verdict.exists:
            exists += 1
    return MltReport(n=n, trials=trials, exists_count=exists, unknown_count=unknown)
