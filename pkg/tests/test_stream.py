import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from streammatch import Graph, generate, max_bipartite_matching, open_stream, read_graph, write_edge_list
from streammatch.stream import (
    BipartitionError,
    EdgeStream,
    SelfLoopError,
    StreamFormatError,
    for_each_pass,
    format_edge_list,
    planted_perfect_bipartite,
    random_general_weighted,
)


def write(tmp_path, text, name="g.el"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_open_stream_header_and_edges(tmp_path):
    s = open_stream(write(tmp_path, "p 4 3 bip 2\n0 2\n0 3\n1 3\n"))
    assert (s.n, s.m, s.is_bipartite) == (4, 3, True)
    assert s.pass_counter == 0  # the setup check is not a pass


def test_self_loop_is_rejected(tmp_path):
    with pytest.raises(SelfLoopError):
        open_stream(write(tmp_path, "p 3\n1 1 5\n"))


def test_empty_stream(tmp_path):
    s = open_stream(write(tmp_path, "p 5 0\n"))
    assert s.m == 0
    assert sum(len(b) for b in s.blocks()) == 0


@pytest.mark.parametrize("text", [
    "0 1\n",  # no header
    "p 3\n0 3\n",  # out of range
    "p 3 2\n0 1\n",  # fewer edges than declared
    "p 3\n0 1 0\n",  # weight below 1
    "p 3\n0 x\n",
    "p 4 bip 2\n0 1\n",  # same side
])
def test_format_errors(tmp_path, text):
    with pytest.raises(StreamFormatError):
        open_stream(write(tmp_path, text))


def test_bipartition_error_type(tmp_path):
    with pytest.raises(BipartitionError):
        open_stream(write(tmp_path, "p 4 bip 2\n2 3\n"))


def test_comments_and_weights(tmp_path):
    g = read_graph(write(tmp_path, "# hello\np 3\n0 1 4\n  # heavy one above\n\n1 2\n"))
    assert [(e.u, e.v, e.weight) for e in g.edges] == [(0, 1, 4), (1, 2, 1)]


def test_for_each_pass_counts(tmp_path):
    s = open_stream(write(tmp_path, "p 4 3\n0 1\n1 2\n2 3\n"))
    seen = []
    for_each_pass(s, seen.append)
    assert len(seen) == 3 and s.pass_counter == 1
    for_each_pass(s, seen.append)
    assert s.pass_counter == 2


def test_header_without_m_costs_a_counting_pass(tmp_path):
    s = open_stream(write(tmp_path, "p 4\n0 1\n1 2\n2 3\n"))
    assert s.m is None
    assert s.count_edges() == 3
    assert s.pass_counter == 1 and s.stats.counting_passes == 1
    s.count_edges()
    assert s.pass_counter == 1


def visit_order(g, order, seed, passes=2):
    s = EdgeStream(g, order=order, seed=seed)
    out = []
    for _ in range(passes):
        out.append([int(x) for b in s.blocks() for x in b.ordinal])
    return out


def test_seeded_shuffle_is_reproducible_and_changes_per_pass():
    g = random_general_weighted(40, 4, 9, seed=3)
    a = visit_order(g, "seeded-shuffle-per-pass", 5)
    b = visit_order(g, "seeded-shuffle-per-pass", 5)
    assert a == b
    assert a[0] != a[1]
    assert sorted(a[0]) == list(range(g.m))


def test_adversarial_fixed_repeats_one_order():
    g = random_general_weighted(40, 4, 9, seed=3)
    a = visit_order(g, "adversarial-fixed", 5, passes=3)
    assert a[0] == a[1] == a[2] != list(range(g.m))


def test_ordinal_follows_the_edge():
    g = random_general_weighted(30, 3, 50, seed=1)
    s = EdgeStream(g, order="seeded-shuffle-per-pass", seed=2, block_size=7)
    for b in s.blocks():
        for o, u, v, w in zip(b.ordinal, b.u, b.v, b.w):
            e = g.edges[o]
            assert (e.u, e.v, e.weight) == (u, v, w)


def test_file_and_graph_streams_agree(tmp_path):
    g = random_general_weighted(25, 3, 20, seed=4)
    p = tmp_path / "w.el"
    write_edge_list(g, p)
    a = EdgeStream(g, order="seeded-shuffle-per-pass", seed=9, block_size=5)
    b = EdgeStream(p, order="seeded-shuffle-per-pass", seed=9, block_size=11)
    cat = lambda s: np.concatenate([np.stack(blk[:4]) for blk in s.blocks()], axis=1)
    assert np.array_equal(cat(a), cat(b))


def test_planted_plant_only():
    g = generate("planted-perfect-bipartite", 4, 0, seed=0)
    assert g.m == 4
    assert len({x for e in g.edges for x in (e.u, e.v)}) == 8
    assert len(max_bipartite_matching(g)) == 4


def test_general_single_vertex_is_empty():
    assert generate("random-general-weighted", 1, 0, 10, seed=0).m == 0


def test_planted_50_has_perfect_matching():
    g = planted_perfect_bipartite(50, 8, seed=11)
    assert len(max_bipartite_matching(g)) == 50


def test_generators_are_seeded():
    a = format_edge_list(random_general_weighted(50, 5, 30, seed=2))
    b = format_edge_list(random_general_weighted(50, 5, 30, seed=2))
    c = format_edge_list(random_general_weighted(50, 5, 30, seed=3))
    assert a == b != c


def test_unknown_generator():
    with pytest.raises(ValueError):
        generate("nope", 3, seed=0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.data())
def test_round_trip(tmp_path_factory, n, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, 99)),
                               max_size=20))
    g = Graph(n, [p for p in pairs if p[0] != p[1]])
    p = tmp_path_factory.mktemp("rt") / "g.el"
    write_edge_list(g, p, weights=True)
    h = read_graph(p)
    assert (h.n, h.edges) == (g.n, g.edges)
