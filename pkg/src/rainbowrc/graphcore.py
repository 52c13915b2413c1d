"""Immutable simple graphs with dense edge ids, distances and diameter.

Edges are referenced everywhere by their dense id ``0..m-1``. Vertex
distance is the usual hop count; the distance between two edges is the
smallest vertex distance between their endpoints plus one, so incident
edges sit at distance 1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

INF = math.inf


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``r`` is the common degree when the graph is regular and ``None``
    otherwise. Small irregular graphs (paths, stars, trees) are allowed so
    that hand-checkable cases can be expressed; everything produced by the
    generator is regular.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    edge_list: tuple[tuple[int, int], ...]
    incident: tuple[tuple[int, ...], ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        """Build a graph; edge ids follow the order of ``edges``."""
        if n < 0:
            raise ValueError("n must be non-negative")
        edge_list: list[tuple[int, int]] = []
        index: dict[tuple[int, int], int] = {}
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in index:
                raise ValueError(f"repeated edge ({u}, {v})")
            index[(u, v)] = len(edge_list)
            edge_list.append((u, v))
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(edge_list):
            nbrs[u].append((v, eid))
            nbrs[v].append((u, eid))
        for lst in nbrs:
            lst.sort()
        adjacency = tuple(tuple(w for w, _ in lst) for lst in nbrs)
        incident = tuple(tuple(e for _, e in lst) for lst in nbrs)
        return cls(n, adjacency, tuple(edge_list), incident, index)

    @property
    def m(self) -> int:
        return len(self.edge_list)

    @property
    def r(self) -> int | None:
        if self.n == 0:
            return None
        degs = {len(a) for a in self.adjacency}
        return degs.pop() if len(degs) == 1 else None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._index

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"invalid vertex id {v}")

    def check_edge(self, e: int) -> None:
        if not 0 <= e < self.m:
            raise ValueError(f"invalid edge id {e}")

    def to_csr(self) -> csr_matrix:
        if self.m == 0:
            return csr_matrix((self.n, self.n), dtype=np.int8)
        arr = np.asarray(self.edge_list, dtype=np.int64)
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


@dataclass(frozen=True)
class Path:
    """A simple path given by its vertices and the ids of its edges."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edge_ids)

    @classmethod
    def from_vertices(cls, g: SimpleGraph, vertices: Sequence[int]) -> "Path":
        vertices = tuple(int(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("path repeats a vertex")
        edge_ids = tuple(g.edge_id(a, b) for a, b in zip(vertices, vertices[1:]))
        return cls(vertices, edge_ids)

    def is_valid(self, g: SimpleGraph) -> bool:
        if len(self.vertices) != len(self.edge_ids) + 1 and self.vertices:
            return False
        if len(set(self.vertices)) != len(self.vertices):
            return False
        for (a, b), e in zip(zip(self.vertices, self.vertices[1:]), self.edge_ids):
            if not g.has_edge(a, b) or g.edge_id(a, b) != e:
                return False
        return True

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1], self.edge_ids[::-1])


def bfs_distances(
    g: SimpleGraph, sources: Iterable[int], max_depth: int | None = None
) -> list[int]:
    """Hop distance from the nearest source; -1 where unreached."""
    dist = [-1] * g.n
    queue: deque[int] = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            queue.append(s)
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if max_depth is not None and du >= max_depth:
            continue
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du + 1
                queue.append(w)
    return dist


def vertex_distance(g: SimpleGraph, u: int, v: int) -> float:
    """Shortest-path hop count, ``math.inf`` if ``u`` and ``v`` are disconnected."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        for w in g.adjacency[a]:
            if w not in dist:
                if w == v:
                    return dist[a] + 1
                dist[w] = dist[a] + 1
                queue.append(w)
    return INF


def edge_distance(g: SimpleGraph, e: int, f: int) -> float:
    """Edge distance: min vertex distance between endpoints, plus one."""
    g.check_edge(e)
    g.check_edge(f)
    dist = bfs_distances(g, g.edge_list[e])
    best = [dist[w] for w in g.edge_list[f] if dist[w] >= 0]
    return min(best) + 1 if best else INF


def edges_within_distance(g: SimpleGraph, e: int, k: int) -> set[int]:
    """All edges other than ``e`` at edge distance at most ``k`` from ``e``.

    An edge is within distance ``k`` exactly when one of its endpoints lies
    within vertex distance ``k - 1`` of an endpoint of ``e``.
    """
    g.check_edge(e)
    if k < 1:
        raise ValueError("k must be at least 1")
    u, v = g.edge_list[e]
    seen = {u: 0, v: 0}
    queue = deque([u, v])
    out: set[int] = set()
    adj, inc = g.adjacency, g.incident
    while queue:
        a = queue.popleft()
        da = seen[a]
        out.update(inc[a])
        if da >= k - 1:
            continue
        for w in adj[a]:
            if w not in seen:
                seen[w] = da + 1
                queue.append(w)
    out.discard(e)
    return out


def eccentricities(g: SimpleGraph) -> list[float]:
    """Per-vertex eccentricity by plain BFS; ``inf`` for disconnected graphs."""
    ecc: list[float] = []
    for s in range(g.n):
        dist = bfs_distances(g, [s])
        ecc.append(INF if min(dist) < 0 else max(dist))
    return ecc


def diameter(g: SimpleGraph) -> float:
    """Largest finite vertex distance, or ``math.inf`` when disconnected."""
    if g.n <= 1:
        return 0
    dist = shortest_path(g.to_csr(), method="D", unweighted=True, directed=False)
    if np.isinf(dist).any():
        return INF
    return int(dist.max())


def format_edge_list(g: SimpleGraph) -> str:
    """Header ``n r`` (``r = -1`` for irregular graphs) then one ``u v`` per edge id."""
    r = g.r
    lines = [f"{g.n} {r if r is not None else -1}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_list)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> SimpleGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ValueError("empty edge-list file")
    n, r = int(rows[0][0]), int(rows[0][1])
    edges = [(int(a), int(b)) for a, b in rows[1:]]
    g = SimpleGraph.from_edges(n, edges)
    if r >= 0 and g.r != r and not (g.n == 0):
        raise ValueError(f"header declares degree {r} but the graph is not {r}-regular")
    return g


def write_edge_list(g: SimpleGraph, path: str | FsPath) -> None:
    FsPath(path).write_text(format_edge_list(g))


def read_edge_list(path: str | FsPath) -> SimpleGraph:
    return parse_edge_list(FsPath(path).read_text())


# Small named graphs used by tests and examples.

def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> SimpleGraph:
    return SimpleGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
