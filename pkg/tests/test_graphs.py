from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ggmle.errors import NotChordal, TooLarge
from ggmle.graphs import (Graph, chordal_cover, clique_decomposition, format_graph,
                          is_chordal, is_perfect_elimination_ordering, max_clique_size,
                          maximal_cliques, maximum_cardinality_search, mlt_bounds,
                          parse_graph, perfect_elimination_ordering)


# -- brute-force oracles ----------------------------------------------------


def has_chordless_cycle(G: Graph) -> bool:
    """An induced subgraph on >= 4 vertices that is a single cycle."""
    for k in range(4, G.p + 1):
        for sub in combinations(range(G.p), k):
            deg = {v: sum(G.has_edge(v, w) for w in sub if w != v) for v in sub}
            if any(d != 2 for d in deg.values()):
                continue
            # connected 2-regular graph == one cycle
            seen, stack = {sub[0]}, [sub[0]]
            while stack:
                v = stack.pop()
                for w in sub:
                    if w not in seen and G.has_edge(v, w):
                        seen.add(w)
                        stack.append(w)
            if len(seen) == k:
                return True
    return False


def brute_maximal_cliques(G: Graph) -> set:
    cliques = []
    for k in range(1, G.p + 1):
        for sub in combinations(range(G.p), k):
            if all(G.has_edge(a, b) for a, b in combinations(sub, 2)):
                cliques.append(frozenset(sub))
    return {c for c in cliques if not any(c < d for d in cliques)}


@st.composite
def graphs(draw, max_p=7):
    p = draw(st.integers(1, max_p))
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(p, [e for e, k in zip(pairs, keep) if k])


# -- basics -----------------------------------------------------------------


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    G = Graph.from_edges(3, [(1, 0), (0, 1)])
    assert G.edge_list() == [(0, 1)]


def test_augmented_edges():
    G = Graph.path(3)
    assert set(G.augmented_edges()) == {(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)}
    mask = G.support_mask()
    assert mask.sum() == 3 + 2 * 2 and np.array_equal(mask, mask.T)


def test_cycle_order():
    assert Graph.cycle(5).cycle_order() == [0, 1, 2, 3, 4]
    assert Graph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).cycle_order() == [0, 2, 1, 3]
    assert Graph.path(4).cycle_order() is None
    # two disjoint triangles are 2-regular but not one cycle
    two = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert two.cycle_order() is None


def test_text_round_trip():
    G = Graph.grid(3)
    assert parse_graph(format_graph(G)) == G
    text = "# comment\np 3\n1 2\n\n2 3\n"
    assert parse_graph(text) == Graph.path(3)
    for bad in ["1 2\n", "p 3\n1 4\n", "p 3\n1 1\n", "p 3\n1\n"]:
        with pytest.raises(ValueError):
            parse_graph(bad)


# -- chordality -------------------------------------------------------------


def test_chordality_examples():
    assert is_chordal(Graph.complete(4))
    assert not is_chordal(Graph.cycle(4))
    assert is_chordal(Graph.path(3))
    assert perfect_elimination_ordering(Graph.cycle(4)) is None
    peo = perfect_elimination_ordering(Graph.complete(4))
    assert sorted(peo) == [0, 1, 2, 3]


def test_mcs_breaks_ties_by_index():
    assert maximum_cardinality_search(Graph.empty(4)) == [0, 1, 2, 3]


@given(graphs())
def test_chordal_matches_chordless_cycle_search(G):
    assert is_chordal(G) == (not has_chordless_cycle(G))


@given(graphs())
def test_peo_is_perfect(G):
    peo = perfect_elimination_ordering(G)
    if peo is not None:
        assert is_perfect_elimination_ordering(G, peo)


def test_exhaustive_small_graphs():
    # every graph on 5 labelled vertices
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    for mask in range(1 << len(pairs)):
        G = Graph.from_edges(5, [e for k, e in enumerate(pairs) if mask >> k & 1])
        assert is_chordal(G) == (not has_chordless_cycle(G))


# -- clique decompositions --------------------------------------------------


def test_decomposition_examples():
    d = clique_decomposition(Graph.path(3))
    assert d.cliques == ((0, 1), (1, 2)) and d.separators == ((1,),)
    d = clique_decomposition(Graph.complete(4))
    assert d.cliques == ((0, 1, 2, 3),) and d.separators == ()
    with pytest.raises(NotChordal):
        clique_decomposition(Graph.cycle(4))


def test_grid_cover_decomposition():
    H = chordal_cover(Graph.grid(3))
    d = clique_decomposition(H)
    assert max(len(c) for c in d.cliques) <= 4
    assert {frozenset(c) for c in d.cliques} == brute_maximal_cliques(H)


def test_disconnected_decomposition_keeps_empty_separator():
    G = Graph.from_edges(4, [(0, 1), (2, 3)])
    d = clique_decomposition(G)
    assert len(d.separators) == 1 and d.separators[0] == ()


@given(graphs())
def test_decomposition_properties(G):
    if not is_chordal(G):
        return
    d = clique_decomposition(G)
    assert len(d.separators) == len(d.cliques) - 1
    assert sum(map(len, d.cliques)) - sum(map(len, d.separators)) == G.p
    assert {frozenset(c) for c in d.cliques} == brute_maximal_cliques(G)
    seen = set(d.cliques[0])
    for k, c in enumerate(d.cliques[1:]):
        sep = set(c) & seen
        assert tuple(sorted(sep)) == d.separators[k]
        assert any(sep <= set(e) for e in d.cliques[:k + 1])
        seen |= set(c)


# -- covers, cliques, bounds ------------------------------------------------


def test_cover_examples():
    P = Graph.path(5)
    assert chordal_cover(P) == P
    C4 = chordal_cover(Graph.cycle(4))
    assert C4.n_edges == 5 and max_clique_size(C4) == 3
    assert max_clique_size(chordal_cover(Graph.cycle(8))) == 3


@given(graphs())
def test_cover_properties(G):
    H = chordal_cover(G)
    assert is_chordal(H)
    assert G.edges <= H.edges
    if is_chordal(G):
        assert H == G


@given(graphs())
def test_max_clique_matches_brute_force(G):
    ref = max(len(c) for c in brute_maximal_cliques(G))
    assert max_clique_size(G) == ref
    assert set(map(frozenset, maximal_cliques(G))) == brute_maximal_cliques(G)


def test_max_clique_examples():
    assert max_clique_size(Graph.cycle(4)) == 2
    assert max_clique_size(Graph.complete(5)) == 5
    assert max_clique_size(Graph.grid(3)) == 2
    with pytest.raises(TooLarge):
        max_clique_size(Graph.empty(65))


def test_mlt_bounds_examples():
    assert mlt_bounds(Graph.cycle(4)) == (2, 3)
    assert mlt_bounds(Graph.grid(3)) == (2, 4)
    G = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    assert mlt_bounds(G) == (3, 3)


@given(graphs())
def test_mlt_bounds_ordered(G):
    lo, hi = mlt_bounds(G)
    assert lo <= hi
    if is_chordal(G):
        assert lo == hi
