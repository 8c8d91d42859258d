from fractions import Fraction
from math import comb

import pytest

from subdivlab.constructions import (
    deletion_lower_bound,
    deletion_probability_exponent,
    gq_incidence,
    is_prime,
    list_six_cycles,
    lower_bound_exponent,
    random_bipartite,
)
from subdivlab.errors import InvalidParameter, TooLarge
from subdivlab.graphs import build_graph, girth, make_pattern, subdivide
from subdivlab.oracle.containment import contains_subdivision, contains_subgraph, host_bitsets


def test_random_bipartite_extremes():
    assert random_bipartite(4, 5, 1.0, 0).num_edges == 20
    assert random_bipartite(4, 5, 0.0, 0).num_edges == 0
    with pytest.raises(InvalidParameter):
        random_bipartite(2, 2, 1.5, 0)


def test_random_bipartite_concentration():
    # Binomial(10000, 1/2): sigma = 50
    for seed in range(100):
        e = random_bipartite(100, 100, 0.5, seed).num_edges
        assert abs(e - 5000) <= 4 * 50


def test_random_bipartite_is_seeded():
    assert random_bipartite(30, 30, 0.3, 9) == random_bipartite(30, 30, 0.3, 9)
    assert random_bipartite(30, 30, 0.3, 9) != random_bipartite(30, 30, 0.3, 10)


def test_exponents():
    assert lower_bound_exponent(3) == Fraction(6, 5)
    assert lower_bound_exponent(4) == Fraction(14, 11)
    for t in range(3, 20):
        # 3/2 - (t - 3/2)/(t^2 - t - 1)
        assert lower_bound_exponent(t) == Fraction(3, 2) - (t - Fraction(3, 2)) / (t * t - t - 1)
        assert deletion_probability_exponent(t) == -(t - Fraction(3, 2)) / (t * t - t - 1) - Fraction(1, 2)


def test_six_cycle_listing_counts():
    K4 = build_graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert list(list_six_cycles(host_bitsets(K4))) == []
    K33 = build_graph(6, [(i, 3 + j) for i in range(3) for j in range(3)])
    # K_{3,3}: 3! * 3! / (2 * 3) Hamiltonian cycles
    assert len(list(list_six_cycles(host_bitsets(K33)))) == 6
    K6 = build_graph(6, [(i, j) for i in range(6) for j in range(i + 1, 6)])
    assert len(list(list_six_cycles(host_bitsets(K6)))) == 60


@pytest.mark.parametrize("seed", range(5))
def test_deletion_output_is_free(seed):
    G, rep = deletion_lower_bound(30, 3, seed)
    C6 = build_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert not contains_subgraph(G, C6).found
    assert rep.verified and rep.exact
    assert rep.final_edges == G.num_edges > 0
    assert rep.initial_edges - rep.deleted <= rep.final_edges
    assert rep.exponent == "6/5"


def test_deletion_t4_small():
    G, rep = deletion_lower_bound(16, 4, 1)
    assert rep.verified
    assert not contains_subdivision(G, make_pattern(1, 4)).found


def test_deletion_is_seeded():
    a, ra = deletion_lower_bound(25, 3, 4)
    b, rb = deletion_lower_bound(25, 3, 4)
    assert a == b and ra == rb


def test_deletion_limits():
    with pytest.raises(TooLarge):
        deletion_lower_bound(41, 3, 0)
    with pytest.raises(InvalidParameter):
        deletion_lower_bound(10, 2, 0)


def test_prime_check():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(InvalidParameter):
        gq_incidence(4)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_gq_counts_and_regularity(q):
    G = gq_incidence(q)
    size = (q * q + 1) * (q + 1)
    assert G.nA == G.nB == size
    assert G.num_edges == (q * q + 1) * (q + 1) ** 2
    assert set(G.degrees()) == {q + 1}


@pytest.mark.parametrize("q", [2, 3])
def test_gq_girth_eight(q):
    assert girth(gq_incidence(q)) == 8


def test_gq2_is_c6_free():
    assert not contains_subdivision(gq_incidence(2), make_pattern(1, 3)).found
    assert not contains_subgraph(gq_incidence(2), subdivide(make_pattern(1, 3))).found


def test_gq_lines_have_q_plus_one_points():
    G = gq_incidence(3)
    # two points share at most one line: all A-codegrees are 0 or 1
    for a in G.partA:
        for b in G.neighbours(a):
            assert G.degree(b) == 4
    seen = {}
    for b in G.partB:
        pts = G.neighbours(b)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                assert (pts[i], pts[j]) not in seen
                seen[(pts[i], pts[j])] = b
    assert len(seen) == G.nB * comb(4, 2)
