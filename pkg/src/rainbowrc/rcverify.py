"""Rainbow paths and rainbow connectivity.

Three routes to a rainbow x-y path:

* :func:`find_rainbow_path`, a generic depth-first search with colour-set
  pruning, a BFS distance bound and iterative deepening. It either returns a
  witness or proves non-existence within the length cap when it finishes
  inside its node budget.
* :func:`rc_exact`, brute force over canonical colourings for tiny graphs.
* :func:`constructive_rainbow_search`, the staged ball / layer / connector
  construction that the O(log n) colouring argument is built on, with
  desk-scale growth targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graphcore import Path, SimpleGraph, bfs_distances, diameter
from .localstruct import BallStructure, Params, bfs_ball, root_path
from .rainbowcolor import EdgeColoring
from .treelemmas import hopcroft_karp


def is_rainbow_path(coloring: EdgeColoring | Sequence[int], p: Path) -> bool:
    colors = coloring.colors if isinstance(coloring, EdgeColoring) else coloring
    cols = [colors[e] for e in p.edge_ids]
    return len(set(cols)) == len(cols)


def default_max_len(g: SimpleGraph) -> int:
    r = g.r
    if r is None or r < 3 or g.n < 2:
        return max(g.n - 1, 1)
    return math.ceil(4 * math.log(g.n) / math.log(r - 1)) + 10


@dataclass(frozen=True)
class SearchResult:
    path: Path | None
    exhaustive: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.path is not None


def find_rainbow_path(
    g: SimpleGraph,
    coloring: EdgeColoring | Sequence[int],
    x: int,
    y: int,
    max_len: int | None = None,
    budget: int | None = 100_000,
) -> SearchResult:
    """Search for a rainbow x-y path with at most ``max_len`` edges.

    ``exhaustive`` on a miss means no such path exists; a miss that ran out
    of ``budget`` node expansions is inconclusive.
    """
    g.check_vertex(x)
    g.check_vertex(y)
    if x == y:
        return SearchResult(Path((x,), ()), True, 0)
    colors = coloring.colors if isinstance(coloring, EdgeColoring) else coloring
    max_len = default_max_len(g) if max_len is None else max_len
    dist = bfs_distances(g, [y])
    if dist[x] < 0 or dist[x] > max_len:
        return SearchResult(None, True, 0)
    adj, inc = g.adjacency, g.incident
    nodes = 0
    for limit in range(dist[x], max_len + 1):
        verts = [x]
        edges: list[int] = []
        on_path = {x}
        masks = [0]
        stack = [0]  # next neighbour index to try at each depth
        while stack:
            depth = len(stack) - 1
            a = verts[-1]
            i = stack[-1]
            if i >= len(adj[a]):
                stack.pop()
                on_path.discard(verts.pop())
                masks.pop()
                if edges:
                    edges.pop()
                continue
            stack[-1] = i + 1
            w = adj[a][i]
            e = inc[a][i]
            bit = 1 << colors[e]
            mask = masks[-1]
            if mask & bit or w in on_path or depth + 1 + dist[w] > limit:
                continue
            nodes += 1
            if w == y:
                return SearchResult(Path(tuple(verts) + (y,), tuple(edges) + (e,)), False, nodes)
            if budget is not None and nodes > budget:
                return SearchResult(None, False, nodes)
            verts.append(w)
            edges.append(e)
            on_path.add(w)
            masks.append(mask | bit)
            stack.append(0)
    return SearchResult(None, True, nodes)


@dataclass
class Verdict:
    status: str  # "Connected" | "NotConnected" | "Unknown"
    pair: tuple[int, int] | None = None
    exhaustive: bool = False
    witnesses: dict[tuple[int, int], Path] = field(default_factory=dict)
    nodes: int = 0
    max_path_len: int = 0

    @property
    def connected(self) -> bool:
        return self.status == "Connected"


def is_rainbow_connected(
    g: SimpleGraph,
    coloring: EdgeColoring | Sequence[int],
    max_len: int | None = None,
    budget: int | None = 100_000,
    pairs: Iterable[tuple[int, int]] | None = None,
) -> Verdict:
    """Check every pair (default: all unordered pairs); stop at the first miss."""
    pairs = combinations(range(g.n), 2) if pairs is None else pairs
    v = Verdict("Connected")
    for x, y in pairs:
        res = find_rainbow_path(g, coloring, x, y, max_len, budget)
        v.nodes += res.nodes
        if res.found:
            v.witnesses[(x, y)] = res.path
            v.max_path_len = max(v.max_path_len, len(res.path))
            continue
        v.status = "NotConnected" if res.exhaustive else "Unknown"
        v.pair = (x, y)
        v.exhaustive = res.exhaustive
        return v
    return v


def canonical_colorings(m: int, q: int):
    """Colourings of ``m`` edges with colours ``< q`` in restricted-growth form."""
    col = [0] * m

    def rec(i: int, top: int):
        if i == m:
            yield tuple(col)
            return
        for c in range(min(top + 2, q)):
            col[i] = c
            yield from rec(i + 1, max(top, c))

    if m == 0:
        yield ()
        return
    yield from rec(1, 0)


def rc_exact(g: SimpleGraph, cap: int | None = None, max_edges: int = 12) -> int:
    """Rainbow connection number by exhaustive search over canonical colourings."""
    if g.m > max_edges:
        raise ValueError(f"{g.m} edges exceed the exhaustive limit {max_edges}")
    diam = diameter(g)
    if math.isinf(diam):
        raise ValueError("graph is disconnected")
    cap = g.m if cap is None else cap
    pairs = list(combinations(range(g.n), 2))
    hard = 0
    for q in range(max(1, int(diam)), cap + 1):
        for col in canonical_colorings(g.m, q):
            # retry the pair that killed the previous colouring first
            order = pairs[hard:hard + 1] + pairs[:hard] + pairs[hard + 1:]
            v = is_rainbow_connected(g, col, max_len=g.n - 1, budget=None, pairs=order)
            if v.connected:
                return q
            hard = pairs.index(v.pair)
    raise ValueError(f"rc exceeds cap {cap}")


# -- constructive search ---------------------------------------------------

@dataclass(frozen=True)
class DeskThresholds:
    """Growth targets standing in for the asymptotic ones at desk scale.

    ``None`` means the size-dependent default: ``ceil(ln n)`` for the inner
    layers and ``min(ceil(n**0.6), n // 10)`` for connector trees.
    """

    inner_target: int | None = None
    outer_target: int | None = None
    min_connectors: int = 10
    min_layers: int = 0
    max_layers: int = 10
    overlap_extra_depth: int = 5

    def inner(self, n: int) -> int:
        return self.inner_target if self.inner_target is not None else math.ceil(math.log(n))

    def outer(self, n: int) -> int:
        if self.outer_target is not None:
            return self.outer_target
        return max(1, min(math.ceil(n**0.6), n // 10))


@dataclass
class ConstructiveSearchState:
    ball_x: BallStructure
    ball_y: BallStructure
    leaves_x: list[int] = field(default_factory=list)
    leaves_y: list[int] = field(default_factory=list)
    matching: dict[int, int] = field(default_factory=dict)
    a_layers: list[list[int]] = field(default_factory=list)
    b_layers: list[list[int]] = field(default_factory=list)
    injections: list[dict[int, int]] = field(default_factory=list)
    excluded: set[int] = field(default_factory=set)
    pruned_edges: set[int] = field(default_factory=set)
    connectors: int = 0
    candidates: int = 0


@dataclass
class ConstructiveResult:
    path: Path | None
    stage: str
    state: ConstructiveSearchState | None = None

    @property
    def ok(self) -> bool:
        return self.path is not None


class _Side:
    """Tree hanging from one root: the ball plus grown layers, with root paths."""

    def __init__(self, g: SimpleGraph, colors: Sequence[int], ball: BallStructure):
        self.g = g
        self.colors = colors
        self.ball = ball
        self.parent: dict[int, tuple[int, int]] = dict(ball.parent)
        self.colset: dict[int, frozenset[int]] = {}

    def path_colors(self, v: int) -> frozenset[int] | None:
        """Colours on the root path of ``v``; ``None`` if that path is not rainbow."""
        if v in self.colset:
            return self.colset[v]
        cols = [self.colors[e] for e in self.root_path(v).edge_ids]
        s = frozenset(cols)
        out = s if len(s) == len(cols) else None
        self.colset[v] = out
        return out

    def add(self, child: int, parent: int, e: int, colset: frozenset[int]) -> None:
        self.parent[child] = (parent, e)
        self.colset[child] = colset

    def root_path(self, v: int) -> Path:
        verts, edges = [v], []
        while verts[-1] != self.ball.root:
            p, e = self.parent[verts[-1]]
            verts.append(p)
            edges.append(e)
        return Path(tuple(verts), tuple(edges))

    def out_edges(self, v: int) -> list[tuple[int, int]]:
        par = self.parent.get(v, (None, None))[0]
        return [(w, e) for w, e in zip(self.g.adjacency[v], self.g.incident[v]) if w != par]


def _grow_connector(
    g: SimpleGraph, root_a: int, root_b: int, blocked: set[int], target: int
) -> tuple[dict, dict, list[tuple[int, int, int]]] | None:
    """Two disjoint BFS trees from ``root_a`` and ``root_b`` avoiding ``blocked``.

    The smaller frontier is expanded until an edge joins the trees or a
    frontier reaches ``target`` vertices without meeting. Returns both parent
    maps and every joining edge ``(a, b, edge_id)`` found at the meeting level.
    """
    par_a: dict[int, tuple[int, int] | None] = {root_a: None}
    par_b: dict[int, tuple[int, int] | None] = {root_b: None}
    front_a, front_b = [root_a], [root_b]
    # roots may already be adjacent
    cross = [(root_a, w, e) for w, e in zip(g.adjacency[root_a], g.incident[root_a]) if w == root_b]
    while not cross:
        can_a = 0 < len(front_a) < target
        can_b = 0 < len(front_b) < target
        if not (can_a or can_b):
            return None
        grow_a = can_a and (not can_b or len(front_a) <= len(front_b))
        front, par, other = (front_a, par_a, par_b) if grow_a else (front_b, par_b, par_a)
        nxt = []
        for v in front:
            for w, e in zip(g.adjacency[v], g.incident[v]):
                if w in blocked or w in par:
                    continue
                if w in other:
                    cross.append((v, w, e) if grow_a else (w, v, e))
                    continue
                par[w] = (v, e)
                nxt.append(w)
        if grow_a:
            front_a = nxt
        else:
            front_b = nxt
    return par_a, par_b, sorted(set(cross))


def _chain(par: dict, v: int) -> tuple[list[int], list[int]]:
    verts, edges = [v], []
    while par[verts[-1]] is not None:
        p, e = par[verts[-1]]
        verts.append(p)
        edges.append(e)
    return verts, edges


def constructive_rainbow_search(
    g: SimpleGraph,
    coloring: EdgeColoring,
    x: int,
    y: int,
    params: Params,
    thresholds: DeskThresholds = DeskThresholds(),
) -> ConstructiveResult:
    """Build a rainbow x-y path through balls, matched leaves, layers and connectors.

    Stages, each of which can starve and name itself in the failure tag:
    ``matching`` (no colour-disjoint leaf pair), ``a-layers``, ``b-layers``,
    ``connectors`` (no connector tree pair met) and ``crossing`` (connectors
    met but no assembled path was rainbow).
    """
    colors = coloring.colors
    k = params.k
    n = g.n
    if x == y:
        return ConstructiveResult(Path((x,), ()), "trivial")
    bx, by = bfs_ball(g, x, k), bfs_ball(g, y, k)
    st = ConstructiveSearchState(bx, by)

    if y in bx.dist:
        p = root_path(bx, y).reversed()
        if is_rainbow_path(colors, p):
            return ConstructiveResult(p, "tree-path", st)

    shared = bx.members & by.members
    if shared:
        h = bfs_distances(g, bx.members)[y]
        if h <= thresholds.overlap_extra_depth:
            big = bfs_ball(g, x, k + thresholds.overlap_extra_depth)
            if y in big.dist:
                p = root_path(big, y).reversed()
                if is_rainbow_path(colors, p):
                    return ConstructiveResult(p, "overlap-extended", st)

    sx, sy = _Side(g, colors, bx), _Side(g, colors, by)

    def usable(side: _Side, other: BallStructure) -> list[int]:
        out = []
        for u in side.ball.leaves:
            if side.path_colors(u) is None:
                continue
            if shared and any(v in other.dist for v in side.root_path(u).vertices):
                continue
            out.append(u)
        return sorted(out)

    st.leaves_x, st.leaves_y = usable(sx, by), usable(sy, bx)
    compat = {
        u: [w for w in st.leaves_y if sx.colset[u].isdisjoint(sy.colset[w])] for u in st.leaves_x
    }
    st.matching = dict(sorted(hopcroft_karp(compat).items()))
    if not st.matching:
        return ConstructiveResult(None, "matching", st)

    balls = bx.members | by.members
    anchor = {u: u for u in st.matching}

    # A-layers grown from the matched leaves of T_x
    a_layers = [sorted(st.matching)]
    in_a = set(a_layers[0])
    kids_a: dict[int, list[int]] = {}
    inner = thresholds.inner(n)
    while len(a_layers) - 1 < thresholds.max_layers:
        i = len(a_layers) - 1
        if len(a_layers[i]) >= inner and i >= thresholds.min_layers:
            break
        nxt: list[int] = []
        nxt_set: set[int] = set()
        for v in a_layers[i]:
            cv = sx.colset[v]
            cy = sy.colset[st.matching[anchor[v]]]
            cand = sx.out_edges(v)
            ok = True
            for w, e in cand:
                c = colors[e]
                if w in balls or w in in_a or w in nxt_set:  # exclusion (b)
                    ok = False
                    break
                if c in cv or c in cy:  # rainbow extension (c)
                    ok = False
                    break
            if not ok:
                st.pruned_edges.update(e for _, e in cand)
                continue
            kids_a[v] = []
            for w, e in cand:
                sx.add(w, v, e, cv | {colors[e]})
                anchor[w] = anchor[v]
                kids_a[v].append(w)
                nxt.append(w)
                nxt_set.add(w)
        if not nxt:
            st.a_layers = a_layers
            return ConstructiveResult(None, "a-layers", st)
        a_layers.append(nxt)
        in_a |= nxt_set
    st.a_layers = a_layers
    t = len(a_layers) - 1

    # B-layers from the matched leaves of T_y, keeping an injection into the A-layers
    inj = {w: u for u, w in st.matching.items()}
    b_layers = [sorted(inj)]
    injections = [dict(sorted(inj.items()))]
    in_b = set(b_layers[0])
    for i in range(t):
        nxt, nxt_set, fnext = [], set(), {}
        for v in b_layers[i]:
            a = injections[i][v]
            kids = kids_a.get(a)
            if not kids:
                continue
            cand = sy.out_edges(v)
            cv = sy.colset[v]
            ok = len(cand) == len(kids)
            if ok:
                for (b, e), aj in zip(cand, kids):
                    c = colors[e]
                    if b in in_a or b in balls or b in in_b or b in nxt_set:
                        ok = False
                        break
                    if c in cv or not sx.colset[aj].isdisjoint(cv | {c}):
                        ok = False
                        break
            if not ok:
                st.pruned_edges.update(e for _, e in cand)
                continue
            for (b, e), aj in zip(cand, kids):
                sy.add(b, v, e, cv | {colors[e]})
                fnext[b] = aj
                nxt.append(b)
                nxt_set.add(b)
        if not nxt:
            st.b_layers, st.injections = b_layers, injections
            return ConstructiveResult(None, "b-layers", st)
        b_layers.append(nxt)
        injections.append(dict(sorted(fnext.items())))
        in_b |= nxt_set
    st.b_layers, st.injections = b_layers, injections

    # connector trees between matched layer ends, then the crossing-edge scan
    st.excluded = balls | in_a | in_b
    blocked = set(st.excluded)
    outer = thresholds.outer(n)
    # Connectors are scanned as soon as each is built: the first rainbow
    # Q_i in pair order is the same as when scanning a batch afterwards.
    for u in b_layers[t]:
        va = injections[t][u]
        grown = _grow_connector(g, va, u, blocked - {va, u}, outer)
        if grown is None:
            continue
        par_a, par_b, crossing = grown
        st.connectors += 1
        blocked |= set(par_a) | set(par_b)
        head = sx.root_path(va).reversed()
        tail = sy.root_path(u)
        forbid = sx.colset[va] | sy.colset[u]
        for a, b, e in crossing:
            st.candidates += 1
            va_verts, va_edges = _chain(par_a, a)
            ub_verts, ub_edges = _chain(par_b, b)
            mid_edges = va_edges[::-1] + [e] + ub_edges
            mid_cols = [colors[f] for f in mid_edges]
            if len(set(mid_cols)) != len(mid_cols) or forbid.intersection(mid_cols):
                continue
            verts = head.vertices + tuple(va_verts[::-1][1:]) + tuple(ub_verts[:-1]) + tail.vertices
            edges = head.edge_ids + tuple(mid_edges) + tail.edge_ids
            p = Path(verts, edges)
            if is_rainbow_path(colors, p) and p.is_valid(g):
                if st.pruned_edges.intersection(p.edge_ids):
                    raise AssertionError("assembled path uses a pruned edge")
                return ConstructiveResult(p, "assembled", st)
    return ConstructiveResult(None, "connectors" if st.connectors == 0 else "crossing", st)


def sample_pairs(n: int, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """``count`` distinct unordered pairs ``x < y`` (all pairs if fewer exist)."""
    total = n * (n - 1) // 2
    if count >= total:
        return list(combinations(range(n), 2))
    seen: set[tuple[int, int]] = set()
    out = []
    while len(out) < count:
        x, y = (int(v) for v in rng.choice(n, size=2, replace=False))
        key = (min(x, y), max(x, y))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out
