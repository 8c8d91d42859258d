from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subdivlab.errors import (
    DuplicateEdge,
    EmptyGraph,
    InvalidEdge,
    InvalidPair,
    InvalidParams,
    InvalidSubset,
)
from subdivlab.graphs import (
    BipartiteGraph,
    EdgeClass,
    build_bipartite,
    build_graph,
    classify_edge,
    codegree,
    degree_stats,
    girth,
    is_balanced,
    is_K_almost_regular,
    light_threshold,
    make_pattern,
    neighbourhood_weights,
    subdivide,
    subdivide_bipartite,
    total_weight,
)
from subdivlab.oracle.containment import contains_subgraph

from conftest import naive_codegree


@st.composite
def bipartite_graphs(draw, max_a=12, max_b=12):
    nA = draw(st.integers(1, max_a))
    nB = draw(st.integers(1, max_b))
    pairs = [(a, b) for a in range(nA) for b in range(nB)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return build_bipartite(nA, nB, chosen)


# -- construction and validation ---------------------------------------------


def test_ids_are_global_with_B_after_A():
    G = build_bipartite(2, 3, [(0, 0), (1, 2)])
    assert list(G.partA) == [0, 1]
    assert list(G.partB) == [2, 3, 4]
    assert G.neighbours(4) == (1,)
    assert G.has_edge(4, 1) and not G.has_edge(0, 3)


def test_out_of_range_endpoint_rejected():
    with pytest.raises(InvalidEdge):
        build_bipartite(2, 2, [(0, 2)])
    with pytest.raises(InvalidEdge):
        build_bipartite(2, 2, [(-1, 0)])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        build_bipartite(2, 2, [(0, 1), (0, 1)])
    with pytest.raises(DuplicateEdge):
        build_graph(3, [(0, 1), (1, 0)])


def test_loops_rejected():
    with pytest.raises(InvalidEdge):
        build_graph(3, [(1, 1)])


def test_induced_keeps_origin_map():
    G = build_bipartite(3, 3, [(0, 0), (1, 1), (2, 2), (0, 2)])
    H, origin = G.induced([0, 2], [5])
    assert (H.nA, H.nB, H.num_edges) == (2, 1, 2)
    assert [origin[v] for v in H.partA] == [0, 2]
    assert origin[H.partB[0]] == 5


# -- codegrees ------------------------------------------------------------------


@given(bipartite_graphs())
def test_codegree_matches_set_intersection(G):
    W = neighbourhood_weights(G)
    for u, v in combinations(G.partA, 2):
        assert W.weight(u, v) == codegree(G, u, v) == naive_codegree(G, u, v)


@given(bipartite_graphs())
def test_wedge_identity(G):
    # every path a-b-a' is counted once per unordered {a, a'}
    W = neighbourhood_weights(G)
    wedges = sum(comb(G.degree(b), 2) for b in G.partB)
    assert W.total() == wedges == total_weight(W, G.partA)


@given(bipartite_graphs())
def test_items_canonical_and_positive(G):
    W = neighbourhood_weights(G)
    items = list(W.items())
    assert items == sorted(items)
    assert all(u < v and w > 0 for (u, v), w in items)


def test_codegree_rejects_bad_pairs():
    G = build_bipartite(2, 2, [(0, 0)])
    with pytest.raises(InvalidPair):
        codegree(G, 0, 0)
    with pytest.raises(InvalidPair):
        codegree(G, 0, 2)
    with pytest.raises(InvalidSubset):
        total_weight(neighbourhood_weights(G), [0, 3])


def test_light_threshold_values():
    assert light_threshold(1, 3) == 3
    assert light_threshold(2, 3) == 6
    assert light_threshold(3, 4) == 15


@given(bipartite_graphs(), st.integers(1, 3), st.integers(3, 5))
def test_classification_monotone_in_codegree(G, s, t):
    W = neighbourhood_weights(G)
    thr = light_threshold(s, t)
    for u, v in combinations(G.partA, 2):
        w = W.weight(u, v)
        cls = classify_edge(W, u, v, s, t)
        expected = EdgeClass.ABSENT if w == 0 else EdgeClass.LIGHT if w < thr else EdgeClass.HEAVY
        assert cls is expected


def test_k22_classification():
    G = build_bipartite(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    W = neighbourhood_weights(G)
    assert W.weight(0, 1) == 2
    assert classify_edge(W, 0, 1, 1, 3) is EdgeClass.LIGHT


# -- patterns and subdivisions --------------------------------------------------


@pytest.mark.parametrize("s,t", [(s, t) for s in range(1, 5) for t in range(3, 7)])
def test_pattern_counts(s, t):
    P = make_pattern(s, t)
    assert P.num_vertices == s + t - 1
    # T is a clique, every S vertex sees all of T, S is independent
    assert len(P.edges) == comb(t - 1, 2) + s * (t - 1)
    H = subdivide(P)
    assert H.n == P.num_vertices + len(P.edges)
    assert H.num_edges == 2 * len(P.edges)


def test_pattern_labels():
    P = make_pattern(1, 3)
    assert [P.label(v) for v in range(3)] == ["S0", "T0", "T1"]
    assert P.edge_label((0, 1)) == "S0-T0"


def test_pattern_rejects_bad_parameters():
    for s, t in [(0, 3), (1, 2)]:
        with pytest.raises(InvalidParams):
            make_pattern(s, t)


def test_subdivided_triangle_is_a_six_cycle():
    H = subdivide(build_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert H.n == 6 and H.num_edges == 6
    assert all(d == 2 for d in H.degrees())
    assert girth(H) == 6


@pytest.mark.parametrize("s,t", [(1, 3), (2, 3), (1, 4), (2, 5)])
def test_subdivision_girth_at_least_six(s, t):
    assert girth(subdivide(make_pattern(s, t))) >= 6


def test_subdivide_bipartite_sides():
    P = make_pattern(2, 4)
    B = subdivide_bipartite(P)
    assert B.nA == P.num_vertices and B.nB == len(P.edges)
    assert all(B.degree(b) == 2 for b in B.partB)


@given(bipartite_graphs(max_a=6, max_b=6))
def test_subgraph_relation_preserved(G):
    # G contains itself and any of its edge-deleted subgraphs
    edges = [(a, b - G.nA) for a, b in G.edges()]
    H = build_bipartite(G.nA, G.nB, edges[: len(edges) // 2]).to_general()
    assert contains_subgraph(G, H).found


# -- degree helpers ------------------------------------------------------------


def test_degree_stats_and_regularity():
    G = build_bipartite(2, 2, [(0, 0), (0, 1), (1, 0)])
    assert degree_stats(G) == (1, 2)
    assert is_K_almost_regular(G, 2) and not is_K_almost_regular(G, 1.5)
    with pytest.raises(EmptyGraph):
        degree_stats(BipartiteGraph(0, 0, ()))


def test_is_balanced():
    assert is_balanced(build_bipartite(2, 4, []))
    assert not is_balanced(build_bipartite(2, 5, []))


def test_girth_of_forest_is_infinite():
    assert girth(build_graph(4, [(0, 1), (1, 2), (1, 3)])) == float("inf")
    assert girth(build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])) == 4


# -- worked examples -----------------------------------------------------------


def k23():
    return build_bipartite(2, 3, [(a, b) for a in range(2) for b in range(3)])


def test_k23_examples():
    G = k23()
    assert G.num_edges == 6
    assert codegree(G, 0, 1) == 3
    W = neighbourhood_weights(G)
    assert W.as_dict() == {(0, 1): 3}
    assert W.total() == 3 == total_weight(W, G.partA)
    assert total_weight(W, [0]) == 0 == total_weight(W, [])
    assert degree_stats(G) == (2, 3)
    assert is_K_almost_regular(G, 1.5) and not is_K_almost_regular(G, 1.49)
    assert is_balanced(G)


def test_edgeless_and_matching():
    E = build_bipartite(1, 1, [])
    assert degree_stats(E) == (0, 0)
    assert codegree(build_bipartite(2, 1, []), 0, 1) == 0
    with pytest.raises(DuplicateEdge):
        build_bipartite(2, 1, [(0, 0), (0, 0)])
    M = build_bipartite(4, 4, [(i, i) for i in range(4)])
    assert neighbourhood_weights(M).as_dict() == {}


def test_path_codegree():
    G = build_bipartite(2, 1, [(0, 0), (1, 0)])
    assert codegree(G, 0, 1) == 1


def test_classify_examples():
    def host_with_codegree(w):
        return neighbourhood_weights(build_bipartite(2, w, [(a, b) for a in range(2) for b in range(w)]))

    assert classify_edge(host_with_codegree(2), 0, 1, 1, 3) is EdgeClass.LIGHT
    assert classify_edge(host_with_codegree(3), 0, 1, 1, 3) is EdgeClass.HEAVY
    assert classify_edge(host_with_codegree(5), 0, 1, 2, 3) is EdgeClass.LIGHT
    assert classify_edge(host_with_codegree(6), 0, 1, 2, 3) is EdgeClass.HEAVY


def test_pattern_examples():
    P = make_pattern(1, 3)
    assert len(P.edges) == 3 and all(d == 2 for d in P.graph().degrees())
    assert len(make_pattern(2, 3).edges) == 5
    H = subdivide(make_pattern(1, 4))
    assert (H.n, H.num_edges) == (10, 12)
    path = subdivide(build_graph(2, [(0, 1)]))
    assert (path.n, path.num_edges) == (3, 2) and path.degree(2) == 2


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 4)])
def test_pattern_contains_complete_bipartite(a, b):
    from subdivlab.embedder import kab_parameters

    s, t = kab_parameters(a, b)
    P = make_pattern(s, t).graph()
    Kab = build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    assert contains_subgraph(P, Kab).found


def test_star_and_regular_examples():
    star = build_bipartite(1, 5, [(0, j) for j in range(5)])
    assert not is_K_almost_regular(star, 2)
    assert not is_balanced(star)
    cube = build_bipartite(4, 4, [(a, b) for a in range(4) for b in range(4) if a != b])
    assert is_K_almost_regular(cube, 1)


def test_weights_match_double_loop_on_larger_random_hosts():
    from subdivlab.constructions import random_bipartite

    for seed in range(5):
        G = random_bipartite(50, 40, 0.2, seed)
        W = neighbourhood_weights(G)
        brute = {
            (u, v): naive_codegree(G, u, v)
            for u, v in combinations(G.partA, 2)
            if naive_codegree(G, u, v)
        }
        assert W.as_dict() == brute
        U = [u for u in G.partA if u % 3]
        assert total_weight(W, U) == sum(w for (u, v), w in brute.items() if u % 3 and v % 3)


@pytest.mark.parametrize("s,t", [(s, t) for s in range(1, 6) for t in range(3, 8)])
def test_pattern_edge_formula(s, t):
    P = make_pattern(s, t)
    assert len(P.edges) == comb(s + t - 1, 2) - comb(s, 2)
    H = subdivide(P)
    # every subdivision vertex has degree exactly two
    assert all(H.degree(v) == 2 for v in range(P.num_vertices, H.n))


def test_wedge_identity_on_100_seeded_graphs():
    from subdivlab.constructions import random_bipartite

    for seed in range(100):
        G = random_bipartite(3 + seed % 17, 2 + seed % 13, 0.1 + (seed % 9) / 10, seed)
        W = neighbourhood_weights(G)
        assert total_weight(W, G.partA) == sum(comb(G.degree(b), 2) for b in G.partB)
