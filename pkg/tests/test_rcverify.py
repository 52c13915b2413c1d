import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rainbowrc.graphcore import Path, SimpleGraph, complete_graph, cycle_graph, path_graph, star_graph
from rainbowrc.localstruct import Params, bfs_ball
from rainbowrc.rainbowcolor import EdgeColoring, greedy_random_coloring, recolor_near_short_cycles
from rainbowrc.rcverify import (
    DeskThresholds,
    canonical_colorings,
    constructive_rainbow_search,
    default_max_len,
    find_rainbow_path,
    is_rainbow_connected,
    is_rainbow_path,
    rc_exact,
    sample_pairs,
)

from conftest import regular

# Frozen output of scripts/oracle_rc_small.py (networkx + brute force).
RC_ORACLE = {"C4": 2, "C5": 3, "C6": 3, "K4": 1, "P4": 3, "K13": 3, "K33": 2}


def named(name):
    if name.startswith("C"):
        return cycle_graph(int(name[1:]))
    if name == "K4":
        return complete_graph(4)
    if name == "P4":
        return path_graph(4)
    if name == "K13":
        return star_graph(3)
    if name == "K33":
        return SimpleGraph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
    raise KeyError(name)


def brute_rainbow_exists(g, colors, x, y, max_len):
    h = nx.Graph(list(g.edge_list))
    h.add_nodes_from(range(g.n))
    for verts in nx.all_simple_paths(h, x, y, cutoff=max_len):
        cols = [colors[g.edge_id(a, b)] for a, b in zip(verts, verts[1:])]
        if len(set(cols)) == len(cols):
            return True
    return False


def test_is_rainbow_path_examples():
    g = path_graph(4)
    assert is_rainbow_path([0, 0, 0], Path((1,), ()))
    assert not is_rainbow_path([1, 1, 0], Path.from_vertices(g, [0, 1, 2]))
    assert is_rainbow_path([2, 5, 9], Path.from_vertices(g, [0, 1, 2, 3]))


def test_find_examples():
    k4 = complete_graph(4)
    res = find_rainbow_path(k4, [0] * 6, 0, 1)
    assert res.found and len(res.path) == 1
    c4 = cycle_graph(4)
    res = find_rainbow_path(c4, [1, 2, 1, 2], 0, 2)
    assert res.found and len(res.path) == 2
    assert {[1, 2, 1, 2][e] for e in res.path.edge_ids} == {1, 2}
    res = find_rainbow_path(c4, [1, 1, 1, 1], 0, 2, max_len=3)
    assert not res.found and res.exhaustive


def test_find_budget_is_not_a_proof():
    g = regular(60, 3, 0)
    res = find_rainbow_path(g, [0] * g.m, 0, 59, max_len=40, budget=1)
    assert not res.found and not res.exhaustive


def test_connected_examples():
    assert is_rainbow_connected(complete_graph(5), [0] * 10).connected
    v = is_rainbow_connected(path_graph(4), [1, 2, 1], budget=None)
    assert v.status == "NotConnected" and v.pair == (0, 3) and v.exhaustive


@given(st.integers(3, 12), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_spanning_tree_distinct_coloring_connects(n, seed):
    gen = np.random.default_rng(seed)
    h = nx.gnp_random_graph(n, 0.4, seed=seed)
    if not nx.is_connected(h):
        h = nx.compose(h, nx.path_graph(n))
    g = SimpleGraph.from_edges(n, list(h.edges()))
    tree = {g.edge_id(u, v) for u, v in nx.minimum_spanning_tree(h).edges()}
    colors = [0] * g.m
    for i, e in enumerate(sorted(tree)):
        colors[e] = i
    for e in set(range(g.m)) - tree:
        colors[e] = int(gen.integers(n))
    v = is_rainbow_connected(g, colors, max_len=n - 1, budget=None)
    assert v.connected
    for (x, y), p in v.witnesses.items():
        assert p.vertices[0] == x and p.vertices[-1] == y
        assert p.is_valid(g) and is_rainbow_path(colors, p)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_exhaustive_search_matches_brute_force(n):
    gen = np.random.default_rng(n)
    for trial in range(100):
        h = nx.gnp_random_graph(n, 0.5, seed=int(gen.integers(10**9)))
        if h.number_of_edges() == 0:
            continue
        g = SimpleGraph.from_edges(n, list(h.edges()))
        colors = gen.integers(0, 3, size=g.m).tolist()
        for x, y in itertools.combinations(range(n), 2):
            res = find_rainbow_path(g, colors, x, y, max_len=n - 1, budget=None)
            assert res.exhaustive or res.found
            assert res.found == brute_rainbow_exists(g, colors, x, y, n - 1)
            if res.found:
                assert res.path.is_valid(g) and is_rainbow_path(colors, res.path)
                assert res.path.vertices[0] == x and res.path.vertices[-1] == y


def test_canonical_colorings_count():
    # restricted-growth strings on 4 items with at most 3 blocks: S(4,1)+S(4,2)+S(4,3)
    assert len(list(canonical_colorings(4, 3))) == 1 + 7 + 6
    assert all(c[0] == 0 for c in canonical_colorings(5, 4))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rc_complete_graph(n):
    assert rc_exact(complete_graph(n)) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_rc_trees(n):
    for t in nx.nonisomorphic_trees(n):
        g = SimpleGraph.from_edges(n, list(t.edges()))
        assert rc_exact(g) == n - 1


@pytest.mark.parametrize("name", sorted(RC_ORACLE))
def test_rc_matches_oracle(name):
    assert rc_exact(named(name)) == RC_ORACLE[name]


def test_rc_errors():
    with pytest.raises(ValueError):
        rc_exact(SimpleGraph.from_edges(4, [(0, 1), (2, 3)]))
    with pytest.raises(ValueError):
        rc_exact(complete_graph(6))
    with pytest.raises(ValueError):
        rc_exact(cycle_graph(5), cap=2)


def test_default_max_len():
    g = regular(1000, 4, 0)
    assert default_max_len(g) == math.ceil(4 * math.log(1000, 3)) + 10
    assert default_max_len(path_graph(5)) == 4


def test_sample_pairs():
    gen = np.random.default_rng(0)
    pairs = sample_pairs(100, 50, gen)
    assert len(set(pairs)) == 50 and all(x < y for x, y in pairs)
    assert sample_pairs(5, 100, gen) == list(itertools.combinations(range(5), 2))


def colored(n, r, seed, k1=2.0, patch=True):
    p = Params(n, r, k1)
    g = regular(n, r, seed)
    c = greedy_random_coloring(g, p.k, p.q, np.random.default_rng(seed))
    if patch:
        c = recolor_near_short_cycles(g, c, p.k, max(3, p.k))
    return p, g, c


class TestConstructive:
    def test_inside_ball_uses_tree_path(self, g500):
        p = Params(500, 4)
        c = greedy_random_coloring(g500, p.k, p.q, np.random.default_rng(0))
        for x in range(50):
            b = bfs_ball(g500, x, p.k)
            if not b.tree_like:
                continue
            y = b.leaves[0]
            res = constructive_rainbow_search(g500, c, x, y, p)
            assert res.stage == "tree-path"
            assert len(res.path) == p.k and is_rainbow_path(c, res.path)

    def test_trivial(self, g500):
        p = Params(500, 4)
        c = greedy_random_coloring(g500, p.k, p.q, np.random.default_rng(0))
        assert constructive_rainbow_search(g500, c, 3, 3, p).stage == "trivial"

    def test_paths_valid_and_avoid_pruned_edges(self):
        p, g, c = colored(500, 4, 9)
        pairs = sample_pairs(g.n, 60, np.random.default_rng(1))
        ok = 0
        for x, y in pairs:
            res = constructive_rainbow_search(g, c, x, y, p)
            if not res.ok:
                assert res.stage in {"matching", "a-layers", "b-layers", "connectors", "crossing"}
                continue
            ok += 1
            assert res.path.vertices[0] == x and res.path.vertices[-1] == y
            assert res.path.is_valid(g) and is_rainbow_path(c, res.path)
            if res.stage == "assembled":
                assert not res.state.pruned_edges.intersection(res.path.edge_ids)
                st_ = res.state
                layers = st_.a_layers + st_.b_layers
                flat = [v for layer in layers for v in layer]
                assert len(flat) == len(set(flat))
        assert ok >= 55

    def test_starving_thresholds_report_stage(self):
        p, g, c = colored(500, 4, 3)
        th = DeskThresholds(outer_target=1)
        stages = set()
        for x, y in sample_pairs(g.n, 30, np.random.default_rng(2)):
            res = constructive_rainbow_search(g, c, x, y, p, th)
            stages.add(res.stage)
        assert stages & {"connectors", "crossing"}

    def test_never_beats_exhaustive_search_on_small_graphs(self):
        infeasible = 0
        for seed in range(8):
            n = 20 + 2 * (seed % 6)
            p, g, c = colored(n, 4, seed, patch=False)
            # fold onto a tight palette so that infeasible pairs actually occur
            c = EdgeColoring(6, tuple(v % 6 for v in c.colors))
            for x, y in itertools.combinations(range(n), 2):
                proof = find_rainbow_path(g, c, x, y, max_len=n - 1, budget=None)
                assert proof.exhaustive or proof.found
                res = constructive_rainbow_search(g, c, x, y, p)
                if not proof.found:
                    infeasible += 1
                    assert not res.ok
                elif res.ok:
                    assert is_rainbow_path(c, res.path)
        assert infeasible > 0
