from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rainbowrc.genreg import (
    AttemptsExhausted,
    MultiGraph,
    Pairing,
    is_simple,
    project,
    random_regular_graph,
    sample_pairing,
    sample_simple_regular,
)
from rainbowrc.graphcore import complete_graph

# Frozen from scripts/oracle_acceptance_rate.py (pure-Python configuration
# model, 200k attempts): p = 0.02282 +- 0.00067. The band below is the
# 1e-4 two-sided binomial interval for 2000 attempts around that estimate.
ACCEPT_P = 0.02282
ACCEPT_BAND = (0.009, 0.037)


def test_pairing_four_points_uniform():
    rng = np.random.default_rng(12345)
    counts = Counter(sample_pairing(2, 2, rng).as_set() for _ in range(100_000))
    assert len(counts) == 3
    for c in counts.values():
        assert abs(c / 100_000 - 1 / 3) < 0.02


def test_pairing_two_points_forced():
    p = sample_pairing(2, 1, np.random.default_rng(0))
    assert p.as_set() == frozenset({frozenset({0, 1})})


def test_odd_point_count_rejected():
    with pytest.raises(ValueError, match="odd"):
        sample_pairing(1, 3, np.random.default_rng(0))
    with pytest.raises(ValueError, match="odd"):
        sample_simple_regular(5, 3, np.random.default_rng(0))


def test_project_examples():
    loops = project(Pairing(2, 2, np.array([[0, 1], [2, 3]])))
    assert loops.edges.tolist() == [[0, 0], [1, 1]]
    double = project(Pairing(2, 2, np.array([[0, 2], [1, 3]])))
    assert double.edges.tolist() == [[0, 1], [0, 1]]
    single = project(Pairing(2, 1, np.array([[0, 1]])))
    assert single.edges.tolist() == [[0, 1]]


def test_is_simple_examples():
    assert not is_simple(MultiGraph(2, np.array([[0, 1], [0, 1]])))
    assert not is_simple(MultiGraph(2, np.array([[0, 0], [0, 1]])))
    k4 = complete_graph(4)
    assert is_simple(MultiGraph(4, np.array(k4.edge_list)))


@given(st.integers(2, 40), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_projection_preserves_points(n, r, seed):
    if (n * r) % 2:
        n += 1
    p = sample_pairing(n, r, np.random.default_rng(seed))
    assert sorted(p.pairs.ravel().tolist()) == list(range(n * r))
    mg = project(p)
    deg = mg.degrees()
    assert deg.sum() == n * r
    assert (deg == r).all()  # loops count twice


def test_pairing_determinism():
    a = sample_pairing(100, 4, np.random.default_rng(9))
    b = sample_pairing(100, 4, np.random.default_rng(9))
    assert np.array_equal(a.pairs, b.pairs)


def test_k4_is_only_cubic_graph_on_four_vertices():
    for seed in range(20):
        g, _ = sample_simple_regular(4, 3, np.random.default_rng(seed))
        assert g == complete_graph(4)


def test_two_vertex_double_degree_never_simple():
    with pytest.raises(AttemptsExhausted) as info:
        sample_simple_regular(2, 2, np.random.default_rng(0), max_attempts=50)
    assert info.value.attempts == 50


def test_max_attempts_validated():
    with pytest.raises(ValueError):
        sample_simple_regular(10, 3, np.random.default_rng(0), max_attempts=0)


def test_large_sample_is_four_regular():
    g = random_regular_graph(1000, 4, 3)
    assert g.n == 1000 and g.m == 2000 and g.r == 4
    assert all(len(a) == 4 for a in g.adjacency)
    assert len(set(g.edge_list)) == g.m


def test_uniform_over_two_regular_graphs_on_four_vertices():
    # Three labelled 4-cycles exist; each should appear about a third of the time.
    rng = np.random.default_rng(77)
    counts = Counter(sample_simple_regular(4, 2, rng)[0].edge_list for _ in range(6000))
    assert len(counts) == 3
    for c in counts.values():
        assert abs(c / 6000 - 1 / 3) < 0.03


def test_acceptance_rate_in_precomputed_band():
    rng = np.random.default_rng(2000)
    accepted = sum(is_simple(project(sample_pairing(1000, 4, rng))) for _ in range(2000))
    assert ACCEPT_BAND[0] <= accepted / 2000 <= ACCEPT_BAND[1]
