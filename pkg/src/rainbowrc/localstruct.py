"""Local structure of sparse graphs: BFS balls, short cycles, dense small sets.

Also houses :class:`Params`, the derived constants of the colouring scheme
(ball depth, palette size, small-set threshold) for a given ``(n, r, K1)``.
"""

from __future__ import annotations

import enum
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations

from .graphcore import Path, SimpleGraph, bfs_distances


class PaletteTooSmall(ValueError):
    """Raised when ``q`` cannot be guaranteed to cover every forbidden set."""


def palette_floor(r: int, k: int) -> int:
    """Smallest palette accepted by the guard: ``3 (r-1)^k + 1``."""
    return 3 * (r - 1) ** k + 1


@dataclass(frozen=True)
class Params:
    """Derived constants for ``G(n, r)`` with multiplier ``K1``.

    ``k_r = log_{r-1}(K1 ln n)``, ``q = ceil(K1^2 r ln n)``,
    ``t0 = log_{r-1}(n) / 10``, ``K2 = K1 / 10``. Natural logarithms
    throughout; the ball depth used by every loop is ``k = floor(k_r)``.
    """

    n: int
    r: int
    K1: float = 2.0

    def __post_init__(self) -> None:
        if self.r < 3:
            raise ValueError("r must be at least 3")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.K1 > 0:
            raise ValueError("K1 must be positive")
        if self.k < 1:
            raise PaletteTooSmall(
                f"k_r = {self.k_r:.3f} < 1 for n={self.n}, r={self.r}, K1={self.K1}"
            )
        if self.q < palette_floor(self.r, self.k):
            raise PaletteTooSmall(
                f"q = {self.q} must exceed 3*(r-1)^k = {3 * (self.r - 1) ** self.k}"
            )

    @property
    def k_r(self) -> float:
        inner = self.K1 * math.log(self.n)
        return math.log(inner) / math.log(self.r - 1) if inner > 0 else -math.inf

    @property
    def k(self) -> int:
        # guard against log ratios landing a hair below an integer
        return math.floor(self.k_r + 1e-9)

    @property
    def q(self) -> int:
        return math.ceil(self.K1**2 * self.r * math.log(self.n) - 1e-9)

    @property
    def t0(self) -> float:
        return math.log(self.n) / math.log(self.r - 1) / 10

    @property
    def K2(self) -> float:
        return self.K1 / 10

    def as_dict(self) -> dict:
        return {
            "n": self.n, "r": self.r, "K1": self.K1, "k_r": self.k_r, "k": self.k,
            "q": self.q, "t0": self.t0, "K2": self.K2,
        }


class BallClass(str, enum.Enum):
    TREE_LIKE = "TreeLike"
    UNICYCLIC = "Unicyclic"
    MULTICYCLIC = "Multicyclic"


@dataclass(frozen=True)
class BallStructure:
    root: int
    depth: int
    dist: dict[int, int]
    parent: dict[int, tuple[int, int]]
    leaves: tuple[int, ...]
    induced_edges: int
    excess: int

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.dist)

    @property
    def cls(self) -> BallClass:
        if self.excess == 0:
            return BallClass.TREE_LIKE
        if self.excess == 1:
            return BallClass.UNICYCLIC
        return BallClass.MULTICYCLIC

    @property
    def tree_like(self) -> bool:
        return self.excess == 0

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {v: [] for v in self.dist}
        for v, (p, _) in self.parent.items():
            kids[p].append(v)
        return kids


def bfs_ball(g: SimpleGraph, x: int, depth: int) -> BallStructure:
    """Ball of radius ``depth`` around ``x`` with a BFS parent tree."""
    g.check_vertex(x)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    dist = {x: 0}
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([x])
    adj, inc = g.adjacency, g.incident
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == depth:
            continue
        for w, e in zip(adj[u], inc[u]):
            if w not in dist:
                dist[w] = du + 1
                parent[w] = (u, e)
                queue.append(w)
    induced = 0
    for u in dist:
        for w in adj[u]:
            if w in dist and u < w:
                induced += 1
    leaves = tuple(v for v, d in dist.items() if d == depth)
    return BallStructure(x, depth, dist, parent, leaves, induced, induced - len(dist) + 1)


def root_path(b: BallStructure, u: int) -> Path:
    """Path from ``u`` up the parent links to the root of ``b``."""
    if u not in b.dist:
        raise ValueError(f"vertex {u} is not in the ball around {b.root}")
    verts = [u]
    edges = []
    while verts[-1] != b.root:
        p, e = b.parent[verts[-1]]
        verts.append(p)
        edges.append(e)
    return Path(tuple(verts), tuple(edges))


def ball_census(g: SimpleGraph, depth: int) -> Counter:
    return Counter(bfs_ball(g, x, depth).cls.value for x in range(g.n))


def vertices_on_short_cycles(g: SimpleGraph, max_cycle: int) -> set[int]:
    """Vertices lying on some cycle of length at most ``max_cycle``.

    From each ``s`` a BFS to depth ``max_cycle // 2`` labels every vertex by
    the neighbour of ``s`` it was reached through; ``s`` is on a short cycle
    iff some edge joins two differently labelled vertices with
    ``d(a) + d(b) + 1 <= max_cycle``.
    """
    half = max_cycle // 2
    on: set[int] = set()
    adj = g.adjacency
    for s in range(g.n):
        dist = {s: 0}
        branch = {s: -1}
        queue = deque([s])
        found = False
        while queue and not found:
            a = queue.popleft()
            da = dist[a]
            for w in adj[a]:
                if w == s:
                    continue
                if w not in dist:
                    if da + 1 > half:
                        # w sits beyond the ball; only the edge (a, w) could close a cycle
                        continue
                    dist[w] = da + 1
                    branch[w] = w if a == s else branch[a]
                    queue.append(w)
                elif a != s and branch[w] != branch[a] and da + dist[w] + 1 <= max_cycle:
                    found = True
                    break
        if found:
            on.add(s)
    return on


def vertices_near_short_cycles(g: SimpleGraph, radius: int, max_cycle: int) -> set[int]:
    """Vertices within distance ``radius`` of a cycle of length at most ``max_cycle``."""
    if radius < 0 or max_cycle < 1:
        raise ValueError("radius must be >= 0 and max_cycle >= 1")
    core = vertices_on_short_cycles(g, max_cycle)
    dist = bfs_distances(g, core, max_depth=radius)
    return {v for v, d in enumerate(dist) if d >= 0}


def edges_near_short_cycles(g: SimpleGraph, radius: int, max_cycle: int) -> set[int]:
    """Edges at edge distance at most ``radius`` from an edge of a short cycle.

    Every cycle vertex is an endpoint of a cycle edge, so this is the set of
    edges with an endpoint within vertex distance ``radius - 1`` of the cycles.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    core = vertices_on_short_cycles(g, max_cycle)
    dist = bfs_distances(g, core, max_depth=radius - 1)
    out = set()
    for v, d in enumerate(dist):
        if d >= 0:
            out.update(g.incident[v])
    return out


class BudgetExceeded(Exception):
    pass


def enumerate_cycles(g: SimpleGraph, max_len: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """All simple cycles of length ``3..max_len`` as canonical vertex tuples.

    Canonical form starts at the smallest vertex and visits the smaller of
    its two cycle neighbours second. ``budget`` caps DFS node expansions.
    """
    cycles: list[tuple[int, ...]] = []
    adj = g.adjacency
    spent = 0
    for s in range(g.n):
        stack = [(s, iter(adj[s]))]
        path = [s]
        on_path = {s}
        while stack:
            a, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if w == s:
                if len(path) >= 3 and path[1] < path[-1]:
                    cycles.append(tuple(path))
                continue
            if w < s or w in on_path or len(path) >= max_len:
                continue
            spent += 1
            if budget is not None and spent > budget:
                raise BudgetExceeded(spent)
            path.append(w)
            on_path.add(w)
            stack.append((w, iter(adj[w])))
    return cycles


def induced_edge_count(g: SimpleGraph, verts: set[int] | frozenset[int]) -> int:
    return sum(1 for u in verts for w in g.adjacency[u] if u < w and w in verts)


@dataclass
class SparsityReport:
    violations: list[frozenset[int]] = field(default_factory=list)
    exhausted: bool = False

    @property
    def certified_sparse(self) -> bool:
        return not self.violations and not self.exhausted


def verify_local_sparsity(g: SimpleGraph, t0: int, budget: int = 1_000_000) -> SparsityReport:
    """Inclusion-minimal vertex sets ``S`` with ``|S| <= t0`` and ``e(S) >= |S| + 1``.

    Minimal violators are vertex sets of two short cycles that meet (theta or
    figure-eight) or of two disjoint cycles plus a connecting path, so the
    search enumerates cycles of length ``<= t0`` and combines them pairwise.
    """
    if t0 < 3:
        raise ValueError("t0 must be at least 3")
    report = SparsityReport()
    spent = [0]

    def tick() -> None:
        spent[0] += 1
        if spent[0] > budget:
            raise BudgetExceeded(spent[0])

    candidates: set[frozenset[int]] = set()
    try:
        cycles = [frozenset(c) for c in enumerate_cycles(g, t0, budget)]
        spent[0] = 0
        for c1, c2 in combinations(cycles, 2):
            tick()
            if c1 & c2:
                union = c1 | c2
                if len(union) <= t0:
                    candidates.add(union)
                continue
            room = t0 - len(c1) - len(c2)
            if room < 0:
                continue
            both = c1 | c2
            # simple paths from c1 to c2 whose interior avoids both cycles
            for a in c1:
                stack = [(a, iter(g.adjacency[a]), ())]
                while stack:
                    v, it, interior = stack[-1]
                    w = next(it, None)
                    if w is None:
                        stack.pop()
                        continue
                    tick()
                    if w in c2:
                        candidates.add(both | frozenset(interior))
                    elif w not in both and w not in interior and len(interior) < room:
                        stack.append((w, iter(g.adjacency[w]), interior + (w,)))
    except BudgetExceeded:
        report.exhausted = True

    minimal: list[frozenset[int]] = []
    for s in sorted(candidates, key=lambda c: (len(c), sorted(c))):
        if induced_edge_count(g, s) < len(s) + 1:
            continue
        if not any(m <= s for m in minimal):
            minimal.append(s)
    report.violations = minimal
    return report
