import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from streammatch import (
    Graph,
    Matching,
    brute_force_matching,
    brute_force_vertex_cover,
    is_covered,
    is_laminar,
    is_vertex_cover,
    max_bipartite_matching,
    max_weight_matching_with_duals,
    min_vertex_cover_bipartite,
    validate_matching,
)
from streammatch.solvers import CertificateError, certify_odd_set_cover
from streammatch.solvers.oracle import InstanceTooLarge
from streammatch.stream import random_bipartite, random_general_weighted

from conftest import random_small_bipartite, random_small_general


def test_bipartite_plant_only():
    g = Graph.bipartite(3, 3, [(0, 3), (1, 4), (2, 5)])
    assert len(max_bipartite_matching(g)) == 3


def test_bipartite_empty():
    assert len(max_bipartite_matching(Graph.bipartite(0, 0))) == 0
    assert len(max_bipartite_matching(Graph.bipartite(3, 2))) == 0


def test_bipartite_requires_bipartition():
    with pytest.raises(ValueError):
        max_bipartite_matching(Graph(2, [(0, 1)]))


def test_konig_examples():
    g = Graph.bipartite(1, 1, [(0, 1)])
    m = max_bipartite_matching(g)
    assert len(min_vertex_cover_bipartite(g, m)) == 1
    star = Graph.bipartite(1, 4, [(0, k) for k in range(1, 5)])
    m = Matching.from_edges([star.edges[2]], weighted=False)
    assert min_vertex_cover_bipartite(star, m).members == {0}


def test_konig_rejects_non_maximum_matching():
    g = Graph.bipartite(2, 2, [(0, 2), (0, 3), (1, 2)])
    with pytest.raises(CertificateError):
        min_vertex_cover_bipartite(g, Matching.from_edges([g.edges[0]], weighted=False))


def test_blossom_single_edge():
    m, cover = max_weight_matching_with_duals(Graph(2, [(0, 1, 7)]))
    assert m.value == 7
    assert cover.scale == 2 and cover.y[0] + cover.y[1] == 14


def test_blossom_triangle_needs_odd_set_or_vertex_duals():
    g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    m, cover = max_weight_matching_with_duals(g)
    assert m.value == 1
    assert cover.value() == 2  # doubled units
    assert all(is_covered(e, cover) for e in g.edges)


def test_blossom_parallel_edges_keep_heaviest():
    g = Graph(2, [(0, 1, 3), (0, 1, 8), (1, 0, 5)])
    m, cover = max_weight_matching_with_duals(g)
    assert m.value == 8
    assert validate_matching(g, m)


def test_tampered_cover_is_rejected():
    g = random_general_weighted(12, 3, 9, seed=4)
    m, cover = max_weight_matching_with_duals(g)
    from streammatch import OddSetCover

    worse = OddSetCover(tuple(max(0, y - 1) for y in cover.y), cover.laminar, cover.z, cover.scale)
    with pytest.raises(CertificateError):
        certify_odd_set_cover(g, m, worse)


def test_brute_force_examples():
    assert brute_force_matching(Graph(0)) == 0
    assert brute_force_matching(Graph(4, [(0, 1, 3), (2, 3, 4)])) == 7
    assert brute_force_matching(Graph(4, [(0, 1), (1, 2), (2, 3)])) == 2
    assert brute_force_vertex_cover(Graph(2, [(0, 1)])) == 1
    assert brute_force_vertex_cover(Graph(0)) == 0
    assert brute_force_vertex_cover(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])) == 2


def test_brute_force_refuses_large_instances():
    with pytest.raises(InstanceTooLarge):
        brute_force_matching(random_general_weighted(30, 4, 5, seed=0))
    with pytest.raises(InstanceTooLarge):
        brute_force_vertex_cover(Graph(21))


def test_small_random_against_brute_force():
    rng = random.Random(7)
    for _ in range(60):
        g = random_small_bipartite(rng)
        m = max_bipartite_matching(g)
        assert len(m) == brute_force_matching(g)
        cover = min_vertex_cover_bipartite(g, m)
        assert len(cover) == brute_force_vertex_cover(g)
        h = random_small_general(rng)
        assert max_weight_matching_with_duals(h)[0].value == brute_force_matching(h)


def test_blossom_agrees_with_networkx():
    for seed in range(15):
        g = random_general_weighted(60, 5, 1000, seed=seed)
        ref = nx.Graph()
        ref.add_weighted_edges_from((e.u, e.v, e.weight) for e in g.edges)
        want = sum(ref[a][b]["weight"] for a, b in nx.max_weight_matching(ref))
        m, cover = max_weight_matching_with_duals(g)
        assert m.value == want
        assert cover.value() == 2 * want


def test_hopcroft_karp_agrees_with_networkx():
    for seed in range(15):
        g = random_bipartite(80, 3, seed=seed)
        ref = nx.Graph()
        ref.add_nodes_from(range(80))
        ref.add_edges_from((e.u, e.v) for e in g.edges)
        want = len(nx.bipartite.hopcroft_karp_matching(ref, top_nodes=range(80))) // 2
        assert len(max_bipartite_matching(g)) == want


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_blossom_certificate_properties(seed):
    g = random_small_general(random.Random(seed), max_n=10, max_edges=20)
    m, cover = max_weight_matching_with_duals(g)
    assert validate_matching(g, m)
    assert all(is_covered(e, cover) for e in g.edges)
    assert is_laminar(cover.laminar.sets)
    assert all(len(s) % 2 == 1 and len(s) >= 3 for s in cover.laminar.sets)
    assert cover.value() == 2 * m.value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_konig_certificate_properties(seed):
    g = random_small_bipartite(random.Random(seed), max_side=6, max_edges=30)
    m = max_bipartite_matching(g)
    cover = min_vertex_cover_bipartite(g, m)
    assert validate_matching(g, m)
    assert is_vertex_cover(g, cover)
    assert len(cover) == len(m)
