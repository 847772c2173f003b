import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majlab.graphs import (ColoredGraph, FixedGap, GraphParams, RandomBiased,
                           RandomHalf, degree_split, pack_color_mask,
                           sample_gnp, split_seed, unpack_row)


def test_p_one_gives_complete_graph():
    g = sample_gnp(GraphParams(3, 1.0, 0), FixedGap.from_delta(0.5))
    assert g.counts() == (2, 1)
    assert all(g.is_edge(u, v) for u in range(3) for v in range(3) if u != v)


def test_p_zero_gives_empty_graph_all_color1():
    g = sample_gnp(GraphParams(4, 0.0, 0), FixedGap.from_delta(2))
    assert g.counts() == (4, 0)
    assert g.edges() == []


def test_same_seed_bit_identical():
    a = sample_gnp(GraphParams(5, 0.5, 42), RandomHalf())
    b = sample_gnp(GraphParams(5, 0.5, 42), RandomHalf())
    assert np.array_equal(a.adj, b.adj)
    assert np.array_equal(a.colors, b.colors)
    c = sample_gnp(GraphParams(5, 0.5, 43), RandomHalf())
    assert not (np.array_equal(a.adj, c.adj) and np.array_equal(a.colors, c.colors))


def test_degree_split_examples():
    k3 = ColoredGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)], [1, 1, 2])
    assert degree_split(k3, 2) == (2, 0)
    empty = ColoredGraph.from_edges(4, [], [1, 2, 1, 2])
    assert degree_split(empty, 1) == (0, 0)
    c4 = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)],
                                 [1, 2, 1, 2])
    assert degree_split(c4, 0) == (0, 2)


def test_degree_split_out_of_range():
    g = ColoredGraph.from_edges(2, [], [1, 2])
    with pytest.raises(ValueError):
        degree_split(g, 2)


def test_bichromatic_double_count():
    g = sample_gnp(GraphParams(40, 0.3, 9), FixedGap.from_delta(4))
    bichromatic = sum(1 for u, v in g.edges() if g.colors[u] != g.colors[v])
    d1_over_color2 = sum(degree_split(g, v)[0] for v in range(g.n)
                         if g.colors[v] == 2)
    assert d1_over_color2 == bichromatic


def test_fixed_gap_counts():
    for n, delta in [(10, 0), (10, 3), (11, 0.5), (11, 5.5), (7, 2.5)]:
        g = sample_gnp(GraphParams(n, 0.4, 1), FixedGap.from_delta(delta))
        c1, c2 = g.counts()
        assert c1 - c2 == 2 * delta


def test_fixed_gap_parity_rejected():
    with pytest.raises(ValueError):
        sample_gnp(GraphParams(10, 0.5, 0), FixedGap.from_delta(0.5))
    with pytest.raises(ValueError):
        sample_gnp(GraphParams(11, 0.5, 0), FixedGap.from_delta(1))
    with pytest.raises(ValueError):
        FixedGap.from_delta(0.3)
    with pytest.raises(ValueError):
        sample_gnp(GraphParams(4, 0.5, 0), FixedGap.from_delta(3))


def test_invalid_p_rejected():
    with pytest.raises(ValueError):
        GraphParams(5, -0.1, 0)
    with pytest.raises(ValueError):
        GraphParams(5, 1.5, 0)
    with pytest.raises(ValueError):
        RandomBiased(1.2)


def test_edge_frequency_matches_p():
    # 10^4 samples at n=30, p=0.3: every pair within 4 standard errors
    n, p, samples = 30, 0.3, 10_000
    acc = np.zeros((n, n), dtype=np.int64)
    for t in range(samples):
        g = sample_gnp(GraphParams(n, p, split_seed(777, t)), RandomHalf())
        bits = np.unpackbits(g.adj.view(np.uint8), axis=1,
                             bitorder="little")[:, :n]
        acc += bits
    se = np.sqrt(p * (1 - p) / samples)
    iu = np.triu_indices(n, 1)
    freqs = acc[iu] / samples
    assert np.all(np.abs(freqs - p) <= 4 * se)


def test_random_biased_extremes():
    g = sample_gnp(GraphParams(50, 0.2, 3), RandomBiased(1.0))
    assert g.counts() == (50, 0)
    g = sample_gnp(GraphParams(50, 0.2, 3), RandomBiased(0.0))
    assert g.counts() == (0, 50)


def test_json_roundtrip():
    g = sample_gnp(GraphParams(12, 0.4, 5), FixedGap.from_delta(1))
    h = ColoredGraph.from_json(g.to_json())
    assert g == h


def test_adjacency_is_symmetric_irreflexive():
    g = sample_gnp(GraphParams(25, 0.5, 8), RandomHalf())
    for v in range(g.n):
        assert not g.is_edge(v, v)
    for u, v in g.edges():
        assert g.is_edge(v, u)


def test_split_seed_deterministic_and_distinct():
    assert split_seed(1, 2, 3) == split_seed(1, 2, 3)
    seeds = {split_seed(0, i) for i in range(1000)}
    assert len(seeds) == 1000


@given(st.lists(st.booleans(), min_size=1, max_size=200))
@settings(deadline=None, max_examples=50)
def test_pack_unpack_roundtrip(bits):
    flags = np.asarray(bits, dtype=bool)
    words = pack_color_mask(flags)
    assert np.array_equal(unpack_row(words, len(bits)), flags)


def test_with_colors_shares_adjacency():
    g = sample_gnp(GraphParams(10, 0.5, 2), FixedGap.from_delta(1))
    h = g.with_colors(np.where(g.colors == 1, 2, 1).astype(np.int8))
    assert h.adj is g.adj
    assert (h.colors != g.colors).all()
