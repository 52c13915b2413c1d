"""Experiment driver: single trials, seeded sweeps, palette probing, cycle censuses.

Seeds follow a counter rule: trial ``t`` of cell ``c`` under master seed ``s``
uses ``numpy.random.SeedSequence([s, c, t])``, spawned into independent
streams for generation, colouring and pair sampling. Any trial can be rerun
on its own from ``(s, c, t)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path as FsPath
from typing import Sequence

import numpy as np

from .genreg import AttemptsExhausted, sample_simple_regular
from .graphcore import Path, SimpleGraph, diameter
from .localstruct import (
    PaletteTooSmall,
    Params,
    bfs_ball,
    enumerate_cycles,
    palette_floor,
    vertices_on_short_cycles,
)
from .rainbowcolor import (
    ColorExhausted,
    EdgeColoring,
    forbidden_neighbourhoods,
    greedy_random_coloring,
    recolor_near_short_cycles,
)
from .rcverify import (
    DeskThresholds,
    constructive_rainbow_search,
    find_rainbow_path,
    is_rainbow_path,
    sample_pairs,
)


@dataclass(frozen=True)
class Cell:
    n: int
    r: int
    K1: float = 2.0


@dataclass
class SweepConfig:
    cells: list[Cell]
    trials: int = 10
    master_seed: int = 0
    verifier: str = "budget"  # budget | exhaustive | constructive
    pairs: int = 200
    all_pairs_max_n: int = 60
    budget: int = 100_000
    order: str = "id"
    patch: bool = True
    patch_radius: int | None = None  # None: ball depth k
    patch_max_cycle: int | None = None  # None: max(3, k)
    max_attempts: int | None = None  # None: default_max_attempts(r) per cell

    def __post_init__(self) -> None:
        self.cells = [c if isinstance(c, Cell) else Cell(*c) if isinstance(c, (list, tuple)) else Cell(**c)
                      for c in self.cells]
        for c in self.cells:
            if (c.n * c.r) % 2:
                raise ValueError(f"cell {c}: r*n must be even")
            if c.r < 3:
                raise ValueError(f"cell {c}: r must be at least 3")
        if self.verifier not in ("budget", "exhaustive", "constructive"):
            raise ValueError(f"unknown verifier {self.verifier!r}")
        if self.order not in ("id", "random"):
            raise ValueError(f"unknown edge order {self.order!r}")

    @property
    def experimental_cells(self) -> list[Cell]:
        """Cells with ``r = 3``, outside the regime the scheme is proven for."""
        return [c for c in self.cells if c.r == 3]

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        return cls(**data)

    @classmethod
    def load(cls, path: str | FsPath) -> "SweepConfig":
        return cls.from_dict(json.loads(FsPath(path).read_text()))


@dataclass
class TrialRecord:
    cell: int
    trial: int
    seed: list[int]
    n: int
    r: int
    K1: float
    k_r: float | None = None
    k: int | None = None
    q: int | None = None
    t0: float | None = None
    status: str = "ok"
    attempts: int = 0
    colored: bool = False
    min_available: int | None = None
    max_forbidden: int | None = None
    extra_colors: int = 0
    colors_used: int | None = None
    verdict: str | None = None
    sampled: bool = False
    pairs_checked: int = 0
    failing_pair: list[int] | None = None
    nodes_searched: int = 0
    max_path_len: int = 0
    diameter: float | None = None
    diameter_ratio: float | None = None
    tree_like_fraction: float | None = None
    short_cycle_vertices: int | None = None
    witnesses: list[list[int]] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    def to_json(self) -> str:
        d = asdict(self)
        d.pop("wall_time")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "TrialRecord":
        return cls(**json.loads(line))


def default_max_attempts(r: int, miss: float = 1e-9) -> int:
    """Attempt cap making generation failure unlikely for degree ``r``.

    Uses the limiting acceptance probability ``exp(-(r^2 - 1) / 4)`` of a
    pairing; never below 1000.
    """
    p = math.exp(-(r * r - 1) / 4)
    return max(1000, math.ceil(math.log(miss) / math.log1p(-p)))


def _attempts(cfg: SweepConfig, cell: Cell) -> int:
    return cfg.max_attempts if cfg.max_attempts is not None else default_max_attempts(cell.r)


def trial_streams(seed: Sequence[int] | int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in ss.spawn(3)]


def _patch_settings(cfg: SweepConfig, k: int) -> tuple[int, int]:
    radius = cfg.patch_radius if cfg.patch_radius is not None else k
    max_cycle = cfg.patch_max_cycle if cfg.patch_max_cycle is not None else max(3, k)
    return radius, max_cycle


def build_instance(
    cell: Cell, seed: Sequence[int] | int, cfg: SweepConfig
) -> tuple[Params, SimpleGraph, int, EdgeColoring, EdgeColoring]:
    """Graph and colourings for a trial: ``(params, g, attempts, raw, patched)``.

    Raises the same exceptions a trial records.
    """
    gen_rng, col_rng, _ = trial_streams(seed)
    params = Params(cell.n, cell.r, cell.K1)
    g, attempts = sample_simple_regular(cell.n, cell.r, gen_rng, _attempts(cfg, cell))
    order = None if cfg.order == "id" else col_rng.permutation(g.m)
    raw = greedy_random_coloring(g, params.k, params.q, col_rng, order=order)
    patched = raw
    if cfg.patch:
        radius, max_cycle = _patch_settings(cfg, params.k)
        patched = recolor_near_short_cycles(g, raw, radius, max_cycle)
    return params, g, attempts, raw, patched


def run_trial(
    cell: Cell, seed: Sequence[int] | int, cfg: SweepConfig | None = None,
    cell_index: int = 0, trial_index: int = 0,
) -> TrialRecord:
    """Generate, colour, patch, verify and measure one instance.

    Generation, guard and colouring failures are recorded, never raised.
    """
    cfg = cfg or SweepConfig([cell])
    start = time.perf_counter()
    seed_list = [int(seed)] if isinstance(seed, (int, np.integer)) else [int(s) for s in seed]
    rec = TrialRecord(cell_index, trial_index, seed_list, cell.n, cell.r, cell.K1)
    try:
        params = Params(cell.n, cell.r, cell.K1)
    except PaletteTooSmall:
        rec.status = "PaletteTooSmall"
        rec.wall_time = time.perf_counter() - start
        return rec
    rec.k_r, rec.k, rec.q, rec.t0 = params.k_r, params.k, params.q, params.t0
    gen_rng, col_rng, pair_rng = trial_streams(seed_list)
    try:
        g, rec.attempts = sample_simple_regular(cell.n, cell.r, gen_rng, _attempts(cfg, cell))
    except AttemptsExhausted as exc:
        rec.status = "AttemptsExhausted"
        rec.attempts = exc.attempts
        rec.wall_time = time.perf_counter() - start
        return rec
    k = params.k
    nbhd = forbidden_neighbourhoods(g, k)
    rec.max_forbidden = max(len(s) for s in nbhd)
    order = None if cfg.order == "id" else col_rng.permutation(g.m)
    try:
        coloring = greedy_random_coloring(g, k, params.q, col_rng, order=order, neighbourhoods=nbhd)
    except ColorExhausted:
        rec.status = "ColorExhausted"
    else:
        rec.colored = True
        rec.min_available = min(coloring.available) if coloring.available else params.q
        radius, max_cycle = _patch_settings(cfg, k)
        if cfg.patch:
            coloring = recolor_near_short_cycles(g, coloring, radius, max_cycle)
        rec.extra_colors = coloring.extra_colors
        rec.colors_used = coloring.colors_used()
        _verify(rec, g, coloring, params, cfg, pair_rng)

    d = diameter(g)
    rec.diameter = d if math.isinf(d) else int(d)
    rec.diameter_ratio = d / (math.log(cell.n) / math.log(cell.r - 1))
    rec.tree_like_fraction = sum(bfs_ball(g, x, k).tree_like for x in range(g.n)) / g.n
    rec.short_cycle_vertices = len(vertices_on_short_cycles(g, _patch_settings(cfg, k)[1]))
    rec.wall_time = time.perf_counter() - start
    return rec


def _verify(rec: TrialRecord, g, coloring, params, cfg: SweepConfig, rng) -> None:
    if g.n <= cfg.all_pairs_max_n:
        pairs = sample_pairs(g.n, g.n * (g.n - 1) // 2, rng)
    else:
        pairs = sample_pairs(g.n, cfg.pairs, rng)
        rec.sampled = True
    rec.verdict = "Connected"
    for x, y in pairs:
        rec.pairs_checked += 1
        if cfg.verifier == "constructive":
            res = constructive_rainbow_search(g, coloring, x, y, params)
            path, exhaustive = res.path, False
        else:
            budget = None if cfg.verifier == "exhaustive" else cfg.budget
            sr = find_rainbow_path(g, coloring, x, y, budget=budget)
            rec.nodes_searched += sr.nodes
            path, exhaustive = sr.path, sr.exhaustive
        if path is None:
            rec.verdict = "NotConnected" if exhaustive else "Unknown"
            rec.failing_pair = [x, y]
            rec.witnesses = []
            return
        rec.max_path_len = max(rec.max_path_len, len(path))
        rec.witnesses.append(list(path.vertices))


def recheck_witnesses(rec: TrialRecord, cfg: SweepConfig) -> bool:
    """Rebuild a trial's instance from its seed and re-validate every witness."""
    if rec.verdict != "Connected":
        return True
    _, g, _, _, coloring = build_instance(Cell(rec.n, rec.r, rec.K1), rec.seed, cfg)
    if len(rec.witnesses) != rec.pairs_checked:
        return False
    for verts in rec.witnesses:
        try:
            p = Path.from_vertices(g, verts)
        except (KeyError, ValueError):
            return False
        if not is_rainbow_path(coloring, p):
            return False
    return True


AGGREGATE_FIELDS = [
    "cell", "n", "r", "K1", "trials", "completed", "connected", "success_rate",
    "mean_diameter_ratio", "mean_tree_like_fraction", "mean_short_cycle_vertices",
    "mean_colors_used", "mean_attempts",
]


def aggregate(cfg: SweepConfig, records: list[TrialRecord]) -> list[dict]:
    rows = []
    for ci, cell in enumerate(cfg.cells):
        recs = [r for r in records if r.cell == ci]
        done = [r for r in recs if r.diameter is not None]

        def mean(vals):
            vals = [v for v in vals if v is not None]
            return f"{sum(vals) / len(vals):.6f}" if vals else ""

        connected = sum(r.verdict == "Connected" for r in recs)
        rows.append({
            "cell": ci, "n": cell.n, "r": cell.r, "K1": cell.K1,
            "trials": len(recs),
            "completed": sum(r.colored for r in recs),
            "connected": connected,
            "success_rate": f"{connected / len(recs):.6f}" if recs else "",
            "mean_diameter_ratio": mean([r.diameter_ratio for r in done]),
            "mean_tree_like_fraction": mean([r.tree_like_fraction for r in done]),
            "mean_short_cycle_vertices": mean([r.short_cycle_vertices for r in done]),
            "mean_colors_used": mean([r.colors_used for r in recs]),
            "mean_attempts": mean([r.attempts for r in recs]),
        })
    return rows


def _run_job(job) -> TrialRecord:
    cell, seed, cfg, ci, ti = job
    return run_trial(cell, seed, cfg, ci, ti)


def sweep(cfg: SweepConfig, out_dir: str | FsPath | None = None, workers: int = 1):
    """Run every trial of every cell; returns ``(records, aggregate_rows)``.

    With ``out_dir`` writes ``trials.jsonl`` and ``aggregate.csv`` (identical
    for any worker count) plus ``timings.csv`` with wall times.
    """
    jobs = [
        (cell, [cfg.master_seed, ci, ti], cfg, ci, ti)
        for ci, cell in enumerate(cfg.cells)
        for ti in range(cfg.trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_run_job, jobs, chunksize=1))
    else:
        records = [_run_job(j) for j in jobs]
    rows = aggregate(cfg, records)
    if out_dir is not None:
        out = FsPath(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "trials.jsonl").write_text("".join(r.to_json() + "\n" for r in records))
        (out / "aggregate.csv").write_text(_csv(rows, AGGREGATE_FIELDS))
        (out / "timings.csv").write_text(_csv(
            [{"cell": r.cell, "trial": r.trial, "wall_time": f"{r.wall_time:.4f}"} for r in records],
            ["cell", "trial", "wall_time"],
        ))
    return records, rows


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def load_trials(path: str | FsPath) -> list[TrialRecord]:
    return [TrialRecord.from_json(ln) for ln in FsPath(path).read_text().splitlines() if ln]


# -- palette probing -------------------------------------------------------

@dataclass
class ProbeResult:
    q_min: int | None
    curve: dict[int, float]
    smoothed: dict[int, float]


def probe_min_q(
    g: SimpleGraph,
    k: int,
    seeds: int,
    q_lo: int,
    q_hi: int,
    target: float = 0.9,
    pairs: int = 200,
    budget: int = 100_000,
    master_seed: int = 0,
) -> ProbeResult:
    """Smallest palette in ``[q_lo, q_hi]`` where colouring plus connectivity succeeds often.

    Success at ``q`` is the fraction of seeds whose colouring completes and
    whose verified pairs all have rainbow paths. Bisection assumes the rate
    grows with ``q``; ``smoothed`` is the running minimum from the right,
    the largest non-decreasing curve below the measured one.
    """
    degree = g.r if g.r is not None else max(len(a) for a in g.adjacency)
    floor = palette_floor(degree, k)
    if q_hi < floor:
        raise ValueError(f"q_hi = {q_hi} is below the palette floor {floor}")
    if q_lo < floor:
        raise ValueError(f"q_lo = {q_lo} is below the palette floor {floor}")
    if q_lo > q_hi:
        raise ValueError("q_lo must not exceed q_hi")
    nbhd = forbidden_neighbourhoods(g, k)
    curve: dict[int, float] = {}

    def rate(q: int) -> float:
        if q in curve:
            return curve[q]
        ok = 0
        for s in range(seeds):
            col_rng, pair_rng = (np.random.default_rng(c) for c in
                                 np.random.SeedSequence([master_seed, s]).spawn(2))
            try:
                col = greedy_random_coloring(g, k, q, col_rng, neighbourhoods=nbhd)
            except ColorExhausted:
                continue
            exhaustive = g.n <= 60
            plist = sample_pairs(g.n, g.n * (g.n - 1) // 2 if exhaustive else pairs, pair_rng)
            if all(find_rainbow_path(g, col, x, y, budget=None if exhaustive else budget).found
                   for x, y in plist):
                ok += 1
        curve[q] = ok / seeds
        return curve[q]

    if rate(q_hi) < target:
        q_min = None
    else:
        lo, hi = q_lo, q_hi
        while lo < hi:
            mid = (lo + hi) // 2
            if rate(mid) >= target:
                hi = mid
            else:
                lo = mid + 1
        q_min = lo
    smoothed: dict[int, float] = {}
    running = math.inf
    for q in sorted(curve, reverse=True):
        running = min(running, curve[q])
        smoothed[q] = running
    return ProbeResult(q_min, dict(sorted(curve.items())), dict(sorted(smoothed.items())))


# -- short cycles ----------------------------------------------------------

@dataclass
class CycleStat:
    k: int
    theory: float
    mean_cycles: float
    ci_cycles: tuple[float, float]
    mean_vertices: float
    ci_vertices: tuple[float, float]

    def cycles_overlap(self) -> bool:
        return self.ci_cycles[0] <= self.theory <= self.ci_cycles[1]


def cycle_census(g: SimpleGraph, max_k: int) -> dict[int, tuple[int, int]]:
    """Per length ``k``: (number of k-cycles, number of vertices on some k-cycle)."""
    by_len: dict[int, list[tuple[int, ...]]] = {k: [] for k in range(3, max_k + 1)}
    for c in enumerate_cycles(g, max_k):
        by_len[len(c)].append(c)
    return {k: (len(cs), len({v for c in cs for v in c})) for k, cs in by_len.items()}


def _ci(vals: np.ndarray) -> tuple[float, float]:
    half = 1.96 * vals.std(ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else math.inf
    return float(vals.mean() - half), float(vals.mean() + half)


def cycle_stats(samples: int, n: int, r: int, max_k: int, seed: int = 0) -> dict[int, CycleStat]:
    """Monte-Carlo short-cycle counts on ``G(n, r)`` against ``(r-1)^k / (2k)``.

    Both the number of k-cycles and the number of vertices lying on them are
    reported with 95% normal-approximation intervals.
    """
    if max_k > 10:
        raise ValueError("max_k must be at most 10")
    if max_k < 3:
        raise ValueError("max_k must be at least 3")
    counts = {k: ([], []) for k in range(3, max_k + 1)}
    for child in np.random.SeedSequence(seed).spawn(samples):
        g, _ = sample_simple_regular(n, r, np.random.default_rng(child))
        for k, (c, v) in cycle_census(g, max_k).items():
            counts[k][0].append(c)
            counts[k][1].append(v)
    out = {}
    for k, (cs, vs) in counts.items():
        cs_a, vs_a = np.asarray(cs, float), np.asarray(vs, float)
        out[k] = CycleStat(k, (r - 1) ** k / (2 * k), float(cs_a.mean()), _ci(cs_a),
                           float(vs_a.mean()), _ci(vs_a))
    return out


# -- binomial tails --------------------------------------------------------

@dataclass(frozen=True)
class BinomialTail:
    n: int
    p: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")


def lower_tail_bound(b: BinomialTail) -> float:
    """``Pr(Bin(n,p) <= alpha n p) <= exp(-(1-alpha)^2 n p / 2)`` for ``0 <= alpha <= 1``."""
    if not 0 <= b.alpha <= 1:
        raise ValueError("lower-tail bound needs 0 <= alpha <= 1")
    return math.exp(-((1 - b.alpha) ** 2) * b.n * b.p / 2)


def upper_tail_bound(b: BinomialTail) -> float:
    """``Pr(Bin(n,p) >= alpha n p) <= (e / alpha)^(alpha n p)`` for ``alpha >= 1``."""
    if b.alpha < 1:
        raise ValueError("upper-tail bound needs alpha >= 1")
    return (math.e / b.alpha) ** (b.alpha * b.n * b.p)


def binomial_tail_bounds(b: BinomialTail) -> tuple[float | None, float | None]:
    """Both Chernoff bounds, ``None`` on the side where ``alpha`` is out of range."""
    lo = lower_tail_bound(b) if 0 <= b.alpha <= 1 else None
    hi = upper_tail_bound(b) if b.alpha >= 1 else None
    if lo is None and hi is None:
        raise ValueError("alpha must be non-negative")
    return lo, hi


def min_rate_for_threshold(trials: int, threshold: float, delta: float = 1e-3) -> float:
    """Smallest true success rate ``p`` for which the lower-tail bound puts
    ``Pr(successes <= threshold * trials)`` below ``delta``."""
    lo, hi = threshold, 1.0
    if lower_tail_bound(BinomialTail(trials, 1.0, threshold)) > delta:
        return math.nan
    for _ in range(60):
        mid = (lo + hi) / 2
        if lower_tail_bound(BinomialTail(trials, mid, threshold / mid)) <= delta:
            hi = mid
        else:
            lo = mid
    return hi
