"""RCON models: graphical models with equal concentration entries inside colour classes."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NotConverged
from .graphs import Graph, _pair
from .mle import MleResult, Status, fit_linear_concentration


@dataclass(frozen=True)
class ColoredGraph:
    """A graph with its vertices and edges partitioned into colour classes."""

    graph: Graph
    vertex_classes: tuple
    edge_classes: tuple

    def __post_init__(self):
        vc = tuple(tuple(sorted(int(v) for v in c)) for c in self.vertex_classes)
        ec = tuple(tuple(sorted(_pair(i, j) for i, j in c)) for c in self.edge_classes)
        flat_v = [v for c in vc for v in c]
        if sorted(flat_v) != list(range(self.graph.p)) or any(not c for c in vc):
            raise ValueError("vertex classes must partition the vertex set")
        flat_e = [e for c in ec for e in c]
        if len(flat_e) != len(set(flat_e)) or set(flat_e) != set(self.graph.edges) \
                or any(not c for c in ec):
            raise ValueError("edge classes must partition the edge set")
        object.__setattr__(self, "vertex_classes", vc)
        object.__setattr__(self, "edge_classes", ec)

    @classmethod
    def uncolored(cls, G: Graph) -> "ColoredGraph":
        """Every vertex and every edge in its own class (the plain graphical model)."""
        return cls(G, tuple((v,) for v in range(G.p)), tuple((e,) for e in G.edge_list()))

    @classmethod
    def single_color(cls, G: Graph) -> "ColoredGraph":
        edges = (tuple(G.edge_list()),) if G.n_edges else ()
        return cls(G, (tuple(range(G.p)),), edges)

    def to_json(self) -> dict:
        G = self.graph
        return {
            "p": G.p,
            "edges": [[i + 1, j + 1] for i, j in G.edge_list()],
            "vertex_classes": [[v + 1 for v in c] for c in self.vertex_classes],
            "edge_classes": [[[i + 1, j + 1] for i, j in c] for c in self.edge_classes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ColoredGraph":
        p = int(obj["p"])
        G = Graph.from_edges(p, ((int(i) - 1, int(j) - 1) for i, j in obj.get("edges", [])))
        vc = [[int(v) - 1 for v in c] for c in obj["vertex_classes"]]
        ec = [[(int(i) - 1, int(j) - 1) for i, j in c] for c in obj.get("edge_classes", [])]
        return cls(G, tuple(vc), tuple(ec))


def read_colored_json(path) -> ColoredGraph:
    return ColoredGraph.from_json(json.loads(Path(path).read_text()))


def rcon_basis(CG: ColoredGraph) -> list[np.ndarray]:
    """One indicator matrix per vertex class, then one per edge class."""
    p = CG.graph.p
    basis = []
    for cls_ in CG.vertex_classes:
        B = np.zeros((p, p))
        B[cls_, cls_] = 1.0
        basis.append(B)
    for cls_ in CG.edge_classes:
        B = np.zeros((p, p))
        for i, j in cls_:
            B[i, j] = B[j, i] = 1.0
        basis.append(B)
    return basis


def class_sums(M: np.ndarray, CG: ColoredGraph) -> np.ndarray:
    """Vertex-class diagonal sums followed by edge-class entry sums of ``M``."""
    out = [float(sum(M[v, v] for v in c)) for c in CG.vertex_classes]
    out += [float(sum(M[i, j] for i, j in c)) for c in CG.edge_classes]
    return np.asarray(out)


def rcon_fit(CG: ColoredGraph, S, eps: float = 1e-10, max_iter: int = 500,
             divergence_bound: float | None = None) -> MleResult:
    """MLE of an RCON model by damped Newton ascent in the class coordinates.

    Starts at ``K = I``.  On convergence every class sum of ``inv(K)`` matches
    the class sum of ``S`` (gradient components are these differences, doubled
    for edge classes).
    """
    S = np.asarray(S, dtype=float)
    res = fit_linear_concentration(rcon_basis(CG), S, eps=eps, max_iter=max_iter,
                                   divergence_bound=divergence_bound, method="rcon")
    if res.converged:
        resid = class_sums(res.sigma_hat, CG) - class_sums(S, CG)
        res.max_fiber_residual = float(np.max(np.abs(resid))) if resid.size else 0.0
        mask = CG.graph.support_mask()
        off = ~mask
        res.max_zero_residual = float(np.max(np.abs(res.k_hat[off]))) if off.any() else 0.0
    return res


@dataclass(frozen=True)
class RconDualReport:
    vertex_class_residual: float
    edge_class_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.vertex_class_residual, self.edge_class_residual) <= self.tol

    def to_dict(self) -> dict:
        return {"vertex_class_residual": self.vertex_class_residual,
                "edge_class_residual": self.edge_class_residual,
                "tol": self.tol, "passed": self.passed}


def rcon_dual_check(result: MleResult, CG: ColoredGraph, S, tol: float = 1e-6) -> RconDualReport:
    if result.status is not Status.CONVERGED:
        raise NotConverged(f"fit status is {result.status.value}")
    diff = class_sums(result.sigma_hat, CG) - class_sums(np.asarray(S, dtype=float), CG)
    s = len(CG.vertex_classes)
    v_res = float(np.max(np.abs(diff[:s]))) if s else 0.0
    e_res = float(np.max(np.abs(diff[s:]))) if diff.size > s else 0.0
    return RconDualReport(v_res, e_res, tol)
