"""Uniform random r-regular graphs from the configuration model.

Points are numbered ``0..rn-1`` and point ``w`` belongs to vertex ``w // r``
(the 0-based form of the block map). A uniform perfect matching of the points
projects to a multigraph; conditioning on simplicity gives the uniform
distribution over simple r-regular graphs on ``n`` labelled vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphcore import SimpleGraph


class AttemptsExhausted(RuntimeError):
    def __init__(self, attempts: int):
        super().__init__(f"no simple pairing after {attempts} attempts")
        self.attempts = attempts


@dataclass(frozen=True)
class Pairing:
    n: int
    r: int
    pairs: np.ndarray  # shape (rn/2, 2), each row sorted

    def phi(self, w: int) -> int:
        return w // self.r

    def as_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(map(int, p)) for p in self.pairs)


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: np.ndarray  # shape (rn/2, 2), u <= v per row; loops have u == v

    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges.ravel(), minlength=self.n)
        return deg


def _check_params(n: int, r: int) -> None:
    if (r * n) % 2:
        raise ValueError(f"r*n = {r * n} is odd; no perfect matching of the points exists")
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")


def sample_pairing(n: int, r: int, rng: np.random.Generator) -> Pairing:
    """Uniform perfect matching of the ``rn`` points.

    A uniform random permutation paired off consecutively is a uniform
    matching: each matching arises from the same number of permutations.
    """
    _check_params(n, r)
    perm = rng.permutation(r * n).reshape(-1, 2)
    perm.sort(axis=1)
    return Pairing(n, r, perm)


def project(p: Pairing) -> MultiGraph:
    edges = p.pairs // p.r
    return MultiGraph(p.n, np.sort(edges, axis=1))


def is_simple(mg: MultiGraph) -> bool:
    e = mg.edges
    if len(e) == 0:
        return True
    if np.any(e[:, 0] == e[:, 1]):
        return False
    keys = e[:, 0].astype(np.int64) * mg.n + e[:, 1]
    return len(np.unique(keys)) == len(keys)


def to_simple_graph(mg: MultiGraph) -> SimpleGraph:
    """Simple graph with edge ids in lexicographic order of endpoints."""
    if not is_simple(mg):
        raise ValueError("multigraph has loops or repeated edges")
    order = np.lexsort((mg.edges[:, 1], mg.edges[:, 0]))
    return SimpleGraph.from_edges(mg.n, mg.edges[order].tolist())


def sample_simple_regular(
    n: int, r: int, rng: np.random.Generator, max_attempts: int = 1000
) -> tuple[SimpleGraph, int]:
    """Rejection-sample pairings until one projects to a simple graph.

    Returns the graph and the number of pairings drawn (accepted one included).
    """
    _check_params(n, r)
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    for attempt in range(1, max_attempts + 1):
        mg = project(sample_pairing(n, r, rng))
        if is_simple(mg):
            return to_simple_graph(mg), attempt
    raise AttemptsExhausted(max_attempts)


def random_regular_graph(n: int, r: int, seed: int, max_attempts: int = 1000) -> SimpleGraph:
    """Convenience wrapper: seeded graph without the attempt count."""
    g, _ = sample_simple_regular(n, r, np.random.default_rng(seed), max_attempts)
    return g
