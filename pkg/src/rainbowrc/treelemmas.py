"""Counting rainbow leaf pairs between two coloured complete d-ary trees.

For trees ``T1, T2`` of the same shape, ``m(T1, T2)`` counts leaf pairs
``(v, w)`` whose two root paths together use distinct colours. When both trees
are rainbow only the pattern of shared colours matters, so the adversarial
minimum is searched over *identification patterns*: a partial injection from
the edges of ``T2`` into the edges of ``T1`` marking which ones share a colour.

Edges of a tree are indexed level by level. Level ``j`` (1-based) holds
``root_arity * d**(j-1)`` edges and edge ``(j, p)`` hangs below ``(j-1, p // d)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .graphcore import SimpleGraph, edges_within_distance


@dataclass(frozen=True)
class ColoredDaryTree:
    d: int
    height: int
    colors: tuple[tuple[Hashable, ...], ...]
    root_arity: int

    @classmethod
    def build(cls, d: int, colors: Sequence[Sequence[Hashable]], root_arity: int | None = None):
        root_arity = d if root_arity is None else root_arity
        height = len(colors)
        for j, level in enumerate(colors, start=1):
            want = root_arity * d ** (j - 1)
            if len(level) != want:
                raise ValueError(f"level {j} needs {want} edges, got {len(level)}")
        return cls(d, height, tuple(tuple(lv) for lv in colors), root_arity)

    @classmethod
    def from_flat(cls, d: int, height: int, flat: Sequence[Hashable], root_arity: int | None = None):
        root_arity = d if root_arity is None else root_arity
        levels, pos = [], 0
        for j in range(1, height + 1):
            size = root_arity * d ** (j - 1)
            levels.append(flat[pos:pos + size])
            pos += size
        if pos != len(flat):
            raise ValueError("flat colour list has the wrong length")
        return cls.build(d, levels, root_arity)

    @classmethod
    def rainbow(cls, d: int, height: int, root_arity: int | None = None, offset: int = 0):
        t = cls.from_flat(d, height, [0] * tree_edge_count(d, height, root_arity), root_arity)
        return cls.from_flat(d, height, list(range(offset, offset + t.edge_count)), root_arity)

    @property
    def edge_count(self) -> int:
        return sum(len(lv) for lv in self.colors)

    @property
    def leaf_count(self) -> int:
        return len(self.colors[-1]) if self.colors else 1

    def flat(self) -> list[Hashable]:
        return [c for lv in self.colors for c in lv]

    def level_offsets(self) -> list[int]:
        out, acc = [], 0
        for lv in self.colors:
            out.append(acc)
            acc += len(lv)
        return out

    def leaf_path_edges(self, leaf: int) -> list[int]:
        """Flat edge indices from the root edge down to ``leaf``."""
        offs = self.level_offsets()
        path = []
        p = leaf
        for j in range(self.height, 0, -1):
            path.append(offs[j - 1] + p)
            p //= self.d
        return path[::-1]

    def leaf_path_colors(self, leaf: int) -> list[Hashable]:
        flat = self.flat()
        return [flat[i] for i in self.leaf_path_edges(leaf)]

    def is_rainbow(self) -> bool:
        flat = self.flat()
        return len(set(flat)) == len(flat)

    def to_graph(self) -> SimpleGraph:
        """Tree as a graph: root is vertex 0 and edge ``i`` leads to vertex ``i + 1``."""
        offs = self.level_offsets()
        edges = []
        for j, lv in enumerate(self.colors, start=1):
            for p in range(len(lv)):
                child = offs[j - 1] + p + 1
                parent = 0 if j == 1 else offs[j - 2] + p // self.d + 1
                edges.append((parent, child))
        return SimpleGraph.from_edges(self.edge_count + 1, edges)

    def format(self) -> str:
        """Level-order colour list, levels separated by ``|``."""
        levels = " | ".join(" ".join(str(c) for c in lv) for lv in self.colors)
        return f"d={self.d} height={self.height} root_arity={self.root_arity}: {levels}"


def tree_edge_count(d: int, height: int, root_arity: int | None = None) -> int:
    root_arity = d if root_arity is None else root_arity
    return sum(root_arity * d ** (j - 1) for j in range(1, height + 1))


def _check_shapes(t1: ColoredDaryTree, t2: ColoredDaryTree) -> None:
    if (t1.d, t1.height, t1.root_arity) != (t2.d, t2.height, t2.root_arity):
        raise ValueError("trees must share arity, height and root arity")


def leaf_color_sets(t: ColoredDaryTree) -> list[frozenset | None]:
    """Colour set of every root-to-leaf path, ``None`` where the path repeats a colour."""
    out = []
    for leaf in range(t.leaf_count):
        cols = t.leaf_path_colors(leaf)
        s = frozenset(cols)
        out.append(s if len(s) == len(cols) else None)
    return out


def compatibility(t1: ColoredDaryTree, t2: ColoredDaryTree) -> list[list[int]]:
    """For each leaf of ``t1``, the leaves of ``t2`` forming a rainbow union."""
    _check_shapes(t1, t2)
    s1, s2 = leaf_color_sets(t1), leaf_color_sets(t2)
    return [
        [w for w, b in enumerate(s2) if b is not None and a.isdisjoint(b)] if a is not None else []
        for a in s1
    ]


def m_pairs(t1: ColoredDaryTree, t2: ColoredDaryTree) -> int:
    return sum(len(row) for row in compatibility(t1, t2))


# -- bounds ---------------------------------------------------------------

def rainbow_pair_bound(d: int, height: int) -> Fraction:
    """``(1 - sum_{i<=height} i / d^i) * d^(2*height)``, exact."""
    return (1 - sum(Fraction(i, d**i) for i in range(1, height + 1))) * d ** (2 * height)


def separated_pair_bound(d: int, L: int) -> Fraction:
    h = L // 2
    return (1 - Fraction(L**2, d**h) - sum(Fraction(i, d**i) for i in range(1, h + 1))) * d ** (2 * L)


# -- identification patterns ----------------------------------------------

def trees_from_pattern(
    d: int, height: int, pattern: Sequence[int]
) -> tuple[ColoredDaryTree, ColoredDaryTree]:
    """Rainbow pair where T2's edge ``j`` reuses T1's colour ``pattern[j]`` (``-1``: fresh)."""
    e = tree_edge_count(d, height)
    used = [p for p in pattern if p >= 0]
    if len(pattern) != e or len(set(used)) != len(used) or any(p >= e for p in used):
        raise ValueError("pattern must be a partial injection into T1's edges")
    t1 = ColoredDaryTree.rainbow(d, height)
    flat2 = [p if p >= 0 else e + j for j, p in enumerate(pattern)]
    return t1, ColoredDaryTree.from_flat(d, height, flat2)


def _incidence(d: int, height: int) -> np.ndarray:
    """Leaves x edges 0/1 matrix of root-to-leaf paths."""
    t = ColoredDaryTree.rainbow(d, height)
    inc = np.zeros((t.leaf_count, t.edge_count), dtype=np.int64)
    for leaf in range(t.leaf_count):
        inc[leaf, t.leaf_path_edges(leaf)] = 1
    return inc


def pattern_count(d: int, height: int) -> int:
    e = tree_edge_count(d, height)
    return sum(math.comb(e, k) ** 2 * math.factorial(k) for k in range(e + 1))


class _PatternState:
    """Collision counts ``C[v, w]`` kept incrementally under pattern edits."""

    def __init__(self, d: int, height: int):
        self.inc = _incidence(d, height)
        self.e = self.inc.shape[1]
        self.coll = np.zeros((self.inc.shape[0], self.inc.shape[0]), dtype=np.int64)
        self.pattern = [-1] * self.e
        self.owner = [-1] * self.e  # T1 edge -> T2 edge mapped onto it

    def link(self, j: int, f: int, sign: int = 1) -> None:
        self.coll += sign * np.outer(self.inc[:, f], self.inc[:, j])
        if sign > 0:
            self.pattern[j], self.owner[f] = f, j
        else:
            self.pattern[j], self.owner[f] = -1, -1

    def m(self) -> int:
        return int(np.count_nonzero(self.coll == 0))


def adversarial_min_exhaustive(d: int, height: int, limit: int = 10**7):
    """Exact minimum of ``m`` over all identification patterns."""
    count = pattern_count(d, height)
    if count > limit:
        raise ValueError(f"{count} patterns exceed the exhaustive limit {limit}")
    st = _PatternState(d, height)
    best = [math.inf, None]

    def rec(j: int) -> None:
        if j == st.e:
            m = st.m()
            if m < best[0]:
                best[0], best[1] = m, list(st.pattern)
            return
        rec(j + 1)
        for f in range(st.e):
            if st.owner[f] < 0:
                st.link(j, f)
                rec(j + 1)
                st.link(j, f, -1)

    rec(0)
    t1, t2 = trees_from_pattern(d, height, best[1])
    return t1, t2, int(best[0])


def adversarial_min_search(
    d: int,
    height: int,
    iters: int,
    seed: int = 0,
    restarts: int = 4,
    t_start: float | None = None,
    t_end: float = 0.05,
):
    """Simulated annealing over identification patterns.

    Moves: link a free T2 edge to a free T1 edge, unlink, retarget a link to a
    free T1 edge, or swap the targets of two links. Temperature decays
    geometrically from ``t_start`` (default ``d**height / 4``) to ``t_end``
    within each restart; ``iters`` is the total over all restarts.
    """
    t_start = d**height / 4 if t_start is None else t_start
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    per = max(1, iters // restarts)
    best_m, best_pat = math.inf, None
    for ss in seeds:
        rng = np.random.default_rng(ss)
        st = _PatternState(d, height)
        e = st.e
        cur = st.m()
        if cur < best_m:
            best_m, best_pat = cur, list(st.pattern)
        ratio = (t_end / t_start) ** (1 / per)
        temp = t_start
        rand = rng.random(size=(per, 4))
        for it in range(per):
            temp *= ratio
            u0, u1, u2, u3 = rand[it]
            j = int(u0 * e)
            f = int(u1 * e)
            kind = int(u2 * 4)
            undo = []
            pj = st.pattern[j]
            if kind == 0:
                if pj >= 0 or st.owner[f] >= 0:
                    continue
                st.link(j, f)
                undo = [(j, f, -1)]
            elif kind == 1:
                if pj < 0:
                    continue
                st.link(j, pj, -1)
                undo = [(j, pj, 1)]
            elif kind == 2:
                if pj < 0 or st.owner[f] >= 0:
                    continue
                st.link(j, pj, -1)
                st.link(j, f)
                undo = [(j, f, -1), (j, pj, 1)]
            else:
                j2 = st.owner[f]
                if pj < 0 or j2 < 0 or j2 == j:
                    continue
                st.link(j, pj, -1)
                st.link(j2, f, -1)
                st.link(j, f)
                st.link(j2, pj)
                undo = [(j, f, -1), (j2, pj, -1), (j, pj, 1), (j2, f, 1)]
            new = st.m()
            delta = new - cur
            if delta <= 0 or u3 < math.exp(-delta / temp):
                cur = new
                if cur < best_m:
                    best_m, best_pat = cur, list(st.pattern)
            else:
                for a, b, s in undo:
                    st.link(a, b, s)
    t1, t2 = trees_from_pattern(d, height, best_pat)
    return t1, t2, int(best_m)


def adversarial_min_m(d: int, height: int, mode: str = "exhaustive", iters: int = 10**5, seed: int = 0):
    if mode == "exhaustive":
        return adversarial_min_exhaustive(d, height)
    if mode in ("search", "local-search"):
        return adversarial_min_search(d, height, iters, seed)
    raise ValueError(f"unknown mode {mode!r}")


# -- the binary counterexample ---------------------------------------------

def binary_counterexample(height: int) -> tuple[ColoredDaryTree, ColoredDaryTree]:
    """Rainbow binary trees with only ``2**height`` rainbow leaf pairs.

    ``T2`` is ``T1`` with the colours of every sibling pair swapped. The root
    path to leaf ``w`` in ``T2`` then carries exactly the colours of the
    siblings along ``T1``'s path to ``w``, which meet every ``T1`` root path
    except the one to ``w`` itself.
    """
    if height < 1:
        raise ValueError("height must be >= 1")
    t1 = ColoredDaryTree.rainbow(2, height)
    levels2 = [[lv[p ^ 1] for p in range(len(lv))] for lv in t1.colors]
    return t1, ColoredDaryTree.build(2, levels2)


# Frozen height-3 instance; level-order colour lists.
BINARY_COUNTEREXAMPLE_3 = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13),
    (1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 13, 12),
)


# -- L-separated trees -----------------------------------------------------

def check_L_separated(t: ColoredDaryTree, L: int) -> tuple[bool, tuple[int, int] | None]:
    """True iff edges at tree edge distance ``<= L`` always differ in colour.

    Violations are reported as a pair of flat edge indices.
    """
    flat = t.flat()
    if L < 1:
        return True, None
    g = t.to_graph()
    for e in range(g.m):
        for f in sorted(edges_within_distance(g, e, L)):
            if f > e and flat[e] == flat[f]:
                return False, (e, f)
    return True, None


def random_L_separated_tree(
    d: int, height: int, L: int, palette: int, rng: np.random.Generator, root_arity: int | None = None
) -> ColoredDaryTree:
    """Greedy uniform colouring of the tree's distance-``L`` edge graph."""
    t = ColoredDaryTree.rainbow(d, height, root_arity)
    g = t.to_graph()
    colors = [-1] * g.m
    for e in range(g.m):
        used = {colors[f] for f in edges_within_distance(g, e, L)}
        free = [c for c in range(palette) if c not in used]
        if not free:
            raise ValueError("palette too small for an L-separated colouring")
        colors[e] = free[int(rng.integers(len(free)))]
    return ColoredDaryTree.from_flat(d, height, colors, t.root_arity)


# -- matchings -------------------------------------------------------------

def hopcroft_karp(adj: Mapping[Hashable, Iterable[Hashable]]) -> dict:
    """Maximum matching of a bipartite graph given as left -> right neighbours."""
    graph = {u: list(vs) for u, vs in adj.items()}
    match_l: dict = {}
    match_r: dict = {}
    inf = math.inf

    def bfs() -> tuple[bool, dict]:
        dist = {}
        queue = deque()
        for u in graph:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in graph[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found, dist

    def dfs(u, dist) -> bool:
        # iterative augmenting-path search along the BFS layering
        stack = [(u, iter(graph[u]))]
        trail = []
        while stack:
            a, it = stack[-1]
            advanced = False
            for v in it:
                w = match_r.get(v)
                if w is None:
                    trail.append((a, v))
                    for x, y in trail:
                        match_l[x] = y
                        match_r[y] = x
                    return True
                if dist.get(w, inf) == dist[a] + 1:
                    trail.append((a, v))
                    stack.append((w, iter(graph[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                dist[a] = inf
                if trail:
                    trail.pop()
        return False

    while True:
        found, dist = bfs()
        if not found:
            break
        for u in graph:
            if u not in match_l:
                dfs(u, dist)
    return match_l


def max_rainbow_matching(
    t1: ColoredDaryTree, t2: ColoredDaryTree
) -> tuple[list[int], list[int], dict[int, int]]:
    """Largest bijection between leaf subsets with rainbow combined root paths.

    With root arity ``d + 1`` the last root subtree of each tree is ignored,
    leaving two complete d-ary shapes.
    """
    _check_shapes(t1, t2)
    compat = compatibility(t1, t2)
    keep = t1.leaf_count
    if t1.root_arity == t1.d + 1:
        keep = t1.leaf_count * t1.d // (t1.d + 1)
    adj = {v: [w for w in compat[v] if w < keep] for v in range(keep)}
    f = hopcroft_karp(adj)
    s1 = sorted(f)
    return s1, sorted(f.values()), dict(sorted(f.items()))
