"""Sequential random colouring of the distance-k edge graph, and its patch step.

Edges are coloured one at a time. Each edge draws uniformly from the palette
minus the colours already placed on edges within edge distance ``k``, which
yields a proper colouring of the k-th power of the line graph; every path
with at most ``k + 1`` edges is then rainbow.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Sequence

import numpy as np

from .graphcore import SimpleGraph, edges_within_distance
from .localstruct import edges_near_short_cycles


class ColorExhausted(RuntimeError):
    def __init__(self, step: int, edge: int):
        super().__init__(f"no colour left for edge {edge} at step {step}")
        self.step = step
        self.edge = edge


@dataclass(frozen=True)
class EdgeColoring:
    q: int
    colors: tuple[int, ...]
    extra_colors: int = 0
    available: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __getitem__(self, e: int) -> int:
        return self.colors[e]

    @property
    def m(self) -> int:
        return len(self.colors)

    def colors_used(self) -> int:
        return len(set(self.colors))


def forbidden_neighbourhoods(g: SimpleGraph, k: int) -> list[list[int]]:
    """Per edge, the sorted ids of the other edges within distance ``k``."""
    return [sorted(edges_within_distance(g, e, k)) for e in range(g.m)]


def greedy_random_coloring(
    g: SimpleGraph,
    k: int,
    q: int,
    rng: np.random.Generator,
    order: Sequence[int] | None = None,
    neighbourhoods: list[list[int]] | None = None,
) -> EdgeColoring:
    """Colour edges in ``order`` (default: by id), uniformly among free colours.

    ``available[i]`` records how many colours the i-th processed edge could
    choose from.
    """
    if q < 1:
        raise ValueError("q must be positive")
    m = g.m
    order = list(range(m)) if order is None else [int(e) for e in order]
    if sorted(order) != list(range(m)):
        raise ValueError("order must be a permutation of the edge ids")
    nbhd = neighbourhoods if neighbourhoods is not None else forbidden_neighbourhoods(g, k)
    colors = [-1] * m
    available = []
    for step, e in enumerate(order):
        used = {colors[f] for f in nbhd[e]}
        used.discard(-1)
        free = [c for c in range(q) if c not in used]
        if not free:
            raise ColorExhausted(step, e)
        available.append(len(free))
        colors[e] = free[int(rng.integers(len(free)))]
    return EdgeColoring(q, tuple(colors), 0, tuple(available))


def verify_proper_gamma(
    g: SimpleGraph, coloring: EdgeColoring, k: int
) -> tuple[bool, tuple[int, int] | None]:
    """Check that no two distinct edges within distance ``k`` share a colour."""
    if coloring.m != g.m:
        raise ValueError("colouring does not cover the graph's edges")
    for e in range(g.m):
        ce = coloring.colors[e]
        for f in sorted(edges_within_distance(g, e, k)):
            if f > e and coloring.colors[f] == ce:
                return False, (e, f)
    return True, None


def recolor_near_short_cycles(
    g: SimpleGraph, coloring: EdgeColoring, radius: int = 10, max_cycle: int = 10
) -> EdgeColoring:
    """Give every edge near a short cycle its own brand-new colour.

    Fresh colours are numbered from ``q + extra_colors`` upward in edge-id
    order. Colours elsewhere are untouched, so rainbow sets stay rainbow.
    """
    near = sorted(edges_near_short_cycles(g, radius, max_cycle))
    if not near:
        return coloring
    colors = list(coloring.colors)
    base = coloring.q + coloring.extra_colors
    for i, e in enumerate(near):
        colors[e] = base + i
    return replace(coloring, colors=tuple(colors), extra_colors=coloring.extra_colors + len(near))


def process_distribution_exact(
    g: SimpleGraph, k: int, q: int, order: Sequence[int] | None = None, limit: int = 10**6
) -> dict[tuple[int, ...], Fraction]:
    """Exact law of :func:`greedy_random_coloring` by enumerating its choice tree.

    Keys are colour tuples indexed by edge id; each value is the product of
    ``1 / a_i`` over the steps.
    """
    m = g.m
    if q**m > limit:
        raise ValueError(f"q^m = {q**m} exceeds the enumeration limit {limit}")
    order = list(range(m)) if order is None else list(order)
    nbhd = forbidden_neighbourhoods(g, k)
    out: dict[tuple[int, ...], Fraction] = {}
    colors = [-1] * m

    def walk(step: int, prob: Fraction) -> None:
        if step == m:
            out[tuple(colors)] = prob
            return
        e = order[step]
        used = {colors[f] for f in nbhd[e]}
        free = [c for c in range(q) if c not in used]
        if not free:
            raise ColorExhausted(step, e)
        p = prob / len(free)
        for c in free:
            colors[e] = c
            walk(step + 1, p)
        colors[e] = -1

    walk(0, Fraction(1))
    return out


def max_conditional_probability(dist: dict[tuple[int, ...], Fraction]) -> Fraction:
    """Max over edges e, colours x and full conditionings of Pr(c(e)=x | rest)."""
    best = Fraction(0)
    if not dist:
        return best
    m = len(next(iter(dist)))
    for e in range(m):
        groups: dict[tuple[int, ...], list[Fraction]] = {}
        for col, p in dist.items():
            rest = col[:e] + col[e + 1:]
            groups.setdefault(rest, []).append(p)
        for probs in groups.values():
            total = sum(probs)
            best = max(best, max(probs) / total)
    return best


def format_coloring(c: EdgeColoring) -> str:
    lines = [f"{c.m} {c.q} {c.extra_colors}"]
    lines.extend(f"{e} {col}" for e, col in enumerate(c.colors))
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> EdgeColoring:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    m, q, extra = (int(x) for x in rows[0])
    colors = [-1] * m
    for e, col in rows[1:]:
        colors[int(e)] = int(col)
    if -1 in colors:
        raise ValueError("colouring file is missing edges")
    return EdgeColoring(q, tuple(colors), extra)


def write_coloring(c: EdgeColoring, path: str | FsPath) -> None:
    FsPath(path).write_text(format_coloring(c))


def read_coloring(path: str | FsPath) -> EdgeColoring:
    return parse_coloring(FsPath(path).read_text())
