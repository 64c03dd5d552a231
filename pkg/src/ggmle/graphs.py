"""Undirected graphs, chordality and clique machinery.

Vertices are ``0..p-1`` in the Python API.  The text format read and written
by :func:`parse_graph` / :func:`format_graph` is 1-based::

    # comment
    p 4
    1 2
    2 3
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import NotChordal, TooLarge

MAX_EXACT_CLIQUE_P = 64


def _pair(i: int, j: int) -> tuple[int, int]:
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..p-1``."""

    p: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("a graph needs at least one vertex")
        clean = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.p and 0 <= j < self.p):
                raise ValueError(f"edge ({i}, {j}) out of range for p={self.p}")
            clean.add(_pair(i, j))
        object.__setattr__(self, "edges", frozenset(clean))

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_edges(cls, p: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(p, frozenset(_pair(i, j) for i, j in edges))

    @classmethod
    def empty(cls, p: int) -> "Graph":
        return cls(p)

    @classmethod
    def complete(cls, p: int) -> "Graph":
        return cls.from_edges(p, ((i, j) for i in range(p) for j in range(i + 1, p)))

    @classmethod
    def path(cls, p: int) -> "Graph":
        return cls.from_edges(p, ((i, i + 1) for i in range(p - 1)))

    @classmethod
    def cycle(cls, p: int) -> "Graph":
        if p < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls.from_edges(p, ((i, (i + 1) % p) for i in range(p)))

    @classmethod
    def grid(cls, rows: int, cols: int | None = None) -> "Graph":
        cols = rows if cols is None else cols
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return cls.from_edges(rows * cols, edges)

    # -- queries ----------------------------------------------------------
    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nbrs: list[set] = [set() for _ in range(self.p)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and _pair(i, j) in self.edges

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def non_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.p) for j in range(i + 1, self.p)
                if (i, j) not in self.edges]

    def augmented_edges(self) -> list[tuple[int, int]]:
        """``E*``: the edges plus every diagonal pair ``(i, i)``."""
        return sorted(set(self.edges) | {(i, i) for i in range(self.p)})

    def support_mask(self) -> np.ndarray:
        """Boolean ``p x p`` mask of ``E*`` (symmetric, diagonal set)."""
        mask = np.eye(self.p, dtype=bool)
        for i, j in self.edges:
            mask[i, j] = mask[j, i] = True
        return mask

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.p, self.p))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.p, self.edges | {_pair(i, j) for i, j in extra})

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.p, self.edges - {_pair(i, j) for i, j in drop})

    def is_complete(self) -> bool:
        return self.n_edges == self.p * (self.p - 1) // 2

    def cycle_order(self) -> list[int] | None:
        """Vertices in traversal order if the graph is a single cycle, else None.

        The walk starts at vertex 0 and steps to its smaller neighbour first.
        """
        if self.p < 3 or self.n_edges != self.p:
            return None
        if any(len(self.adjacency[v]) != 2 for v in range(self.p)):
            return None
        order = [0]
        prev, cur = None, 0
        while True:
            nxt = min(w for w in self.adjacency[cur] if w != prev) if prev is not None \
                else min(self.adjacency[cur])
            if nxt == 0:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        return order if len(order) == self.p else None


# ---------------------------------------------------------------------------
# Chordality


def maximum_cardinality_search(G: Graph) -> list[int]:
    """Visit order of maximum cardinality search, ties to the lowest index."""
    weight = [0] * G.p
    visited = [False] * G.p
    order = []
    for _ in range(G.p):
        best = -1
        for v in range(G.p):
            if not visited[v] and (best < 0 or weight[v] > weight[best]):
                best = v
        visited[best] = True
        order.append(best)
        for w in G.adjacency[best]:
            if not visited[w]:
                weight[w] += 1
    return order


def is_perfect_elimination_ordering(G: Graph, order: list[int]) -> bool:
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        later = [w for w in G.adjacency[v] if pos[w] > pos[v]]
        if len(later) < 2:
            continue
        u = min(later, key=pos.__getitem__)
        if not all(w == u or w in G.adjacency[u] for w in later):
            return False
    return True


def perfect_elimination_ordering(G: Graph) -> list[int] | None:
    """A perfect elimination ordering if ``G`` is chordal, otherwise None."""
    peo = maximum_cardinality_search(G)[::-1]
    return peo if is_perfect_elimination_ordering(G, peo) else None


def is_chordal(G: Graph) -> bool:
    return perfect_elimination_ordering(G) is not None


@dataclass(frozen=True)
class CliqueDecomposition:
    """Maximal cliques in running-intersection order with their separators.

    ``separators[k]`` is the intersection of ``cliques[k + 1]`` with the union
    of the earlier cliques; empty separators (between components) are kept so
    that ``len(separators) == len(cliques) - 1``.
    """

    cliques: tuple[tuple[int, ...], ...]
    separators: tuple[tuple[int, ...], ...]


def clique_decomposition(G: Graph) -> CliqueDecomposition:
    mcs = maximum_cardinality_search(G)
    if not is_perfect_elimination_ordering(G, mcs[::-1]):
        raise NotChordal("graph is not chordal")
    pos = {v: k for k, v in enumerate(mcs)}
    candidates = []
    for v in mcs:
        earlier = {w for w in G.adjacency[v] if pos[w] < pos[v]}
        candidates.append(frozenset(earlier | {v}))
    maximal = [c for c in candidates if not any(c < d for d in candidates)]
    # each maximal clique arises once, at its last-visited vertex
    cliques: list[frozenset] = []
    for c in maximal:
        if c not in cliques:
            cliques.append(c)
    seps = []
    seen: set = set(cliques[0])
    for c in cliques[1:]:
        seps.append(tuple(sorted(c & seen)))
        seen |= c
    return CliqueDecomposition(
        cliques=tuple(tuple(sorted(c)) for c in cliques),
        separators=tuple(seps),
    )


def chordal_cover(G: Graph) -> Graph:
    """Chordal supergraph by greedy min-fill elimination (lowest index on ties).

    The maximal clique size of the result bounds the treewidth-based quantity
    ``q#(G)`` from above; it is not guaranteed to be minimal.
    """
    adj = [set(s) for s in G.adjacency]
    remaining = set(range(G.p))
    fill_edges = set()
    while remaining:
        best, best_fill = -1, None
        for v in sorted(remaining):
            nb = sorted(adj[v] & remaining)
            missing = [(a, b) for k, a in enumerate(nb) for b in nb[k + 1:]
                       if b not in adj[a]]
            if best_fill is None or len(missing) < len(best_fill):
                best, best_fill = v, missing
                if not missing:
                    break
        for a, b in best_fill:
            adj[a].add(b)
            adj[b].add(a)
            fill_edges.add(_pair(a, b))
        remaining.discard(best)
    return G.with_edges(fill_edges)


# ---------------------------------------------------------------------------
# Cliques


def _bitsets(G: Graph) -> list[int]:
    return [sum(1 << w for w in G.adjacency[v]) for v in range(G.p)]


def maximal_cliques(G: Graph) -> list[tuple[int, ...]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    if G.p > MAX_EXACT_CLIQUE_P:
        raise TooLarge(f"exact clique enumeration limited to p <= {MAX_EXACT_CLIQUE_P}")
    nb = _bitsets(G)
    out = []

    def expand(r: int, cand: int, excl: int):
        if not cand and not excl:
            out.append(tuple(v for v in range(G.p) if r >> v & 1))
            return
        pool = cand | excl
        pivot = max((v for v in range(G.p) if pool >> v & 1),
                    key=lambda v: bin(cand & nb[v]).count("1"))
        rest = cand & ~nb[pivot]
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            expand(r | low, cand & nb[v], excl & nb[v])
            cand &= ~low
            excl |= low
            rest &= ~low

    expand(0, (1 << G.p) - 1, 0)
    return sorted(out)


def max_clique_size(G: Graph) -> int:
    """Exact clique number by branch and bound (``p <= 64``)."""
    if G.p > MAX_EXACT_CLIQUE_P:
        raise TooLarge(f"exact clique search limited to p <= {MAX_EXACT_CLIQUE_P}")
    nb = _bitsets(G)
    best = 1

    def grow(size: int, cand: int):
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + bin(cand).count("1") <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= ~low
            grow(size + 1, cand & nb[v])

    grow(0, (1 << G.p) - 1)
    return best


def mlt_bounds(G: Graph) -> tuple[int, int]:
    """``(q(G), q(G+))``: clique number and the clique number of a min-fill cover.

    Every graph's maximum likelihood threshold lies in this range.  The upper
    value is heuristic; a better triangulation can only lower it.
    """
    lower = max_clique_size(G)
    upper = max_clique_size(chordal_cover(G))
    return lower, max(lower, upper)


# ---------------------------------------------------------------------------
# Text format


def parse_graph(text: str) -> Graph:
    p = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if p is None:
            if len(parts) != 2 or parts[0] != "p":
                raise ValueError(f"line {lineno}: expected 'p <n>' header")
            p = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<i> <j>'")
        i, j = int(parts[0]), int(parts[1])
        if not (1 <= i <= p and 1 <= j <= p) or i == j:
            raise ValueError(f"line {lineno}: bad edge {i} {j} for p={p}")
        edges.append((i - 1, j - 1))
    if p is None:
        raise ValueError("missing 'p <n>' header")
    return Graph.from_edges(p, edges)


def format_graph(G: Graph) -> str:
    lines = [f"p {G.p}"] + [f"{i + 1} {j + 1}" for i, j in G.edge_list()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())
