"""Positive definite completion of partial symmetric matrices.

A partial matrix is specified on the augmented edge set ``E*`` of a graph
(edges plus diagonal).  Completability is the same question as existence of
the Gaussian graphical model MLE, and the determinant-maximising completion is
the fitted covariance.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import (DegenerateConfiguration, DimensionMismatch, IterationCapExceeded,
                     NotChordal, NotCompletable, OutOfRange, TooLarge)
from .graphs import Graph, clique_decomposition, is_chordal, maximal_cliques
from .linalg import is_positive_definite

# inequalities closer than this to equality count as boundary (not completable)
BOUNDARY_MARGIN = 1e-10
MAX_CYCLE_P = 24


@dataclass(frozen=True)
class PartialMatrix:
    """Symmetric matrix known only on ``E*`` of ``graph``; NaN elsewhere."""

    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        V = np.array(self.values, dtype=float)
        p = self.graph.p
        if V.shape != (p, p):
            raise DimensionMismatch(f"values have shape {V.shape}, graph has p={p}")
        mask = self.graph.support_mask()
        V = np.where(mask, V, np.nan)
        known = V[mask]
        if not np.all(np.isfinite(known)):
            raise ValueError("every entry on E* must be a finite number")
        if not np.array_equal(V[mask], V.T[mask]):
            raise ValueError("partial matrix is not symmetric")
        V.setflags(write=False)
        object.__setattr__(self, "values", V)

    @classmethod
    def from_matrix(cls, S, G: Graph) -> "PartialMatrix":
        S = np.asarray(S, dtype=float)
        if S.shape != (G.p, G.p):
            raise DimensionMismatch(f"matrix has shape {S.shape}, graph has p={G.p}")
        return cls(G, (S + S.T) / 2.0)

    @classmethod
    def from_entries(cls, p: int, entries: dict) -> "PartialMatrix":
        """Build from ``{(i, j): value}`` (0-based); the graph is read off the keys."""
        V = np.full((p, p), np.nan)
        edges = []
        for (i, j), v in entries.items():
            V[i, j] = V[j, i] = v
            if i != j:
                edges.append((i, j))
        return cls(Graph.from_edges(p, edges), V)

    @property
    def p(self) -> int:
        return self.graph.p

    def get(self, i: int, j: int) -> float | None:
        v = self.values[i, j]
        return None if np.isnan(v) else float(v)

    def filled(self, value: float = 0.0) -> np.ndarray:
        return np.where(np.isnan(self.values), value, self.values)

    def to_json(self) -> dict:
        G = self.graph
        vals = {f"{i + 1},{j + 1}": float(self.values[i, j]) for i, j in G.augmented_edges()}
        return {"p": G.p, "edges": [[i + 1, j + 1] for i, j in G.edge_list()], "values": vals}

    @classmethod
    def from_json(cls, obj: dict) -> "PartialMatrix":
        p = int(obj["p"])
        G = Graph.from_edges(p, ((int(i) - 1, int(j) - 1) for i, j in obj.get("edges", [])))
        V = np.full((p, p), np.nan)
        for key, v in obj["values"].items():
            i, j = (int(t) - 1 for t in key.split(","))
            if i != j and not G.has_edge(i, j):
                raise ValueError(f"value given for non-edge {key}")
            V[i, j] = V[j, i] = float(v)
        missing = [i + 1 for i in range(p) if np.isnan(V[i, i])]
        if missing:
            raise ValueError(f"diagonal values missing for vertices {missing}")
        return cls(G, V)


def read_partial_json(path) -> PartialMatrix:
    return PartialMatrix.from_json(json.loads(Path(path).read_text()))


def project(S, G: Graph) -> PartialMatrix:
    """Keep the entries of ``S`` on ``E*`` and forget the rest."""
    return PartialMatrix.from_matrix(S, G)


def clique_feasible(P: PartialMatrix) -> bool:
    """True iff every fully specified principal block (clique) is positive definite."""
    G = P.graph
    cliques = clique_decomposition(G).cliques if is_chordal(G) else maximal_cliques(G)
    V = P.values
    return all(is_positive_definite(V[np.ix_(C, C)]) for C in cliques)


def chordal_completion(P: PartialMatrix) -> np.ndarray:
    """Determinant-maximising completion for a chordal pattern, in closed form."""
    from .linalg import invert_pd
    from .mle import chordal_precision

    if not is_chordal(P.graph):
        raise NotChordal("chordal completion needs a chordal pattern")
    K = chordal_precision(P.graph, P.filled())
    if K is None:
        raise NotCompletable("a fully specified block is not positive definite")
    return invert_pd(K)


@dataclass(frozen=True)
class CompletionResult:
    completable: bool
    sigma: np.ndarray | None
    boundary: bool = False
    iterations: int = 0
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "completable": self.completable,
            "boundary": self.boundary,
            "sigma": None if self.sigma is None else self.sigma.tolist(),
            "iterations": self.iterations,
            "detail": self.detail,
        }


def maxdet_completion(P: PartialMatrix, eps: float = 1e-10,
                      max_iter: int = 10_000) -> CompletionResult:
    """Determinant-maximising positive definite completion by coordinate ascent.

    Maximises ``log det K - <P, K>`` over ``K`` supported on the pattern
    (coordinate ascent from the identity, finished by Newton steps when
    slow); the completion is ``inv(K)``.  An unbounded objective means no
    positive definite completion exists.  The verdict is flagged ``boundary``
    when divergence was detected through the size of the iterates rather than
    through a separating certificate.
    """
    from .mle import Status, fit_hybrid

    if not clique_feasible(P):
        return CompletionResult(False, None, detail="a fully specified block is not positive definite")
    res = fit_hybrid(P.graph, P, eps=eps, max_iter=max_iter)
    if res.status is Status.CONVERGED:
        return CompletionResult(True, res.sigma_hat, iterations=res.iterations,
                                detail=f"{res.method} ascent converged")
    if res.status is Status.NONEXISTENT:
        return CompletionResult(False, None, boundary=not res.detail.startswith("certificate"),
                                iterations=res.iterations, detail=res.detail)
    raise IterationCapExceeded(f"no verdict after {res.iterations} sweeps")


# ---------------------------------------------------------------------------
# closed-form criteria


def _check_angles(angles, name="angle"):
    a = np.asarray(angles, dtype=float)
    if not np.all((a > 0.0) & (a < np.pi)):
        raise OutOfRange(f"every {name} must lie strictly between 0 and pi")
    return a


def pd3_angle_slack(alpha: float, beta: float, gamma: float) -> float:
    """Smallest gap in the four triangle-type inequalities for a 3x3 cosine matrix."""
    a, b, c = _check_angles([alpha, beta, gamma])
    return float(min(b + c - a, a + c - b, a + b - c, 2.0 * np.pi - (a + b + c)))


def pd3_angle_test(alpha: float, beta: float, gamma: float) -> bool:
    """Positive definiteness of ``[[1, cos a, cos b], [cos a, 1, cos c], [cos b, cos c, 1]]``."""
    return pd3_angle_slack(alpha, beta, gamma) > BOUNDARY_MARGIN


def cycle_slack(theta) -> float:
    """Minimum over odd subsets ``S`` of ``(|S|-1)pi + sum_notS theta - sum_S theta``."""
    t = _check_angles(theta)
    if t.shape[0] < 3:
        raise OutOfRange("a cycle needs at least 3 angles")
    if t.shape[0] > MAX_CYCLE_P:
        raise TooLarge(f"odd-subset enumeration limited to p <= {MAX_CYCLE_P}")
    return float(_kernels.odd_subset_slack(np.ascontiguousarray(t)))


def cycle_completable(theta) -> bool:
    """Completability of a unit-diagonal cycle pattern with edge cosines ``cos(theta_k)``.

    ``theta[k]`` belongs to edge ``(k, k+1)`` and ``theta[-1]`` to the closing
    edge ``(p-1, 0)``.
    """
    return cycle_slack(theta) > BOUNDARY_MARGIN


def cycle_partial_matrix(theta) -> PartialMatrix:
    t = _check_angles(theta)
    p = t.shape[0]
    entries = {(i, i): 1.0 for i in range(p)}
    for k in range(p):
        entries[(k, (k + 1) % p)] = math.cos(t[k])
    return PartialMatrix.from_entries(p, entries)


def buhl_angles(vectors) -> np.ndarray:
    """Angles between consecutive lines for two-sample data on a cycle.

    Each vector is replaced by the unit vector spanning the same line in the
    upper half plane; ``theta[k]`` is the angle between vectors ``k`` and
    ``k+1`` (cyclically).
    """
    X = np.asarray(vectors, dtype=float)
    if X.ndim != 2 or X.shape[1] != 2 or X.shape[0] < 3:
        raise DegenerateConfiguration("need at least 3 points in the plane")
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateConfiguration("zero vector")
    phi = np.mod(np.arctan2(X[:, 1], X[:, 0]), np.pi)
    theta = np.abs(np.roll(phi, -1) - phi)
    gaps = np.diff(np.sort(phi), append=np.min(phi) + np.pi)
    if np.any(gaps < 1e-12):
        raise DegenerateConfiguration("two vectors span the same line")
    return theta


def buhl_two_sample(vectors) -> bool:
    """Existence of the cycle MLE from two samples, given as one planar point per vertex."""
    return cycle_completable(buhl_angles(vectors))
