"""Command-line entry point: ``rainbowrc <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .genreg import AttemptsExhausted, sample_simple_regular
from .graphcore import read_edge_list, write_edge_list
from .localstruct import (
    Params,
    ball_census,
    verify_local_sparsity,
)
from .rainbowcolor import (
    ColorExhausted,
    greedy_random_coloring,
    read_coloring,
    recolor_near_short_cycles,
    verify_proper_gamma,
    write_coloring,
)
from .rcverify import constructive_rainbow_search, find_rainbow_path, sample_pairs
from .treelemmas import adversarial_min_m


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_gen(args) -> int:
    try:
        g, attempts = sample_simple_regular(args.n, args.r, np.random.default_rng(args.seed), args.max_attempts)
    except AttemptsExhausted as exc:
        print(f"attempts exhausted: {exc.attempts}", file=sys.stderr)
        return 1
    write_edge_list(g, args.out)
    print(f"attempts={attempts}", file=sys.stderr)
    return 0


def cmd_inspect(args) -> int:
    g = read_edge_list(args.input)
    params = Params(g.n, g.r, args.k1)
    _emit({"kind": "params", **params.as_dict()})
    _emit({"kind": "balls", "depth": params.k, **ball_census(g, params.k)})
    for k, (cycles, verts) in harness.cycle_census(g, min(10, max(3, 2 * params.k + 1))).items():
        _emit({"kind": "short_cycles", "k": k, "cycles": cycles, "vertices": verts})
    t0 = args.t0 if args.t0 is not None else max(3, int(params.t0))
    rep = verify_local_sparsity(g, t0, args.budget)
    _emit({"kind": "sparsity", "t0": t0, "exhausted": rep.exhausted,
           "violations": [sorted(s) for s in rep.violations]})
    return 0


def cmd_color(args) -> int:
    g = read_edge_list(args.input)
    params = Params(g.n, g.r, args.k1)
    if args.verify:
        col = read_coloring(args.coloring)
        ok, bad = verify_proper_gamma(g, col, params.k)
        _emit({"proper": ok, "violation": bad, "k": params.k})
        return 0 if ok else 1
    rng = np.random.default_rng(args.seed)
    order = None if args.order == "id" else rng.permutation(g.m)
    try:
        col = greedy_random_coloring(g, params.k, params.q, rng, order=order)
    except ColorExhausted as exc:
        print(str(exc), file=sys.stderr)
        return 1
    if args.patch:
        col = recolor_near_short_cycles(g, col, args.patch_radius, args.patch_max_cycle)
    write_coloring(col, args.out)
    print(f"q={params.q} k={params.k} extra={col.extra_colors}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    g = read_edge_list(args.graph)
    col = read_coloring(args.coloring)
    rng = np.random.default_rng(args.seed)
    if args.pairs == "all":
        pairs = sample_pairs(g.n, g.n * (g.n - 1) // 2, rng)
    elif args.pairs.startswith("sample:"):
        pairs = sample_pairs(g.n, int(args.pairs.split(":", 1)[1]), rng)
    else:
        raise SystemExit("--pairs must be 'all' or 'sample:N'")
    params = Params(g.n, g.r, args.k1) if args.mode == "constructive" else None
    for x, y in pairs:
        if args.mode == "constructive":
            res = constructive_rainbow_search(g, col, x, y, params)
            status = "found" if res.ok else f"failure:{res.stage}"
            _emit({"x": x, "y": y, "status": status,
                   "path_len": len(res.path) if res.ok else None, "nodes_searched": None})
            continue
        budget = None if args.mode == "exhaustive" else args.budget
        sr = find_rainbow_path(g, col, x, y, args.max_len, budget)
        status = "found" if sr.found else ("none" if sr.exhaustive else "unknown")
        _emit({"x": x, "y": y, "status": status,
               "path_len": len(sr.path) if sr.found else None, "nodes_searched": sr.nodes})
    return 0


def cmd_tree_lemma(args) -> int:
    t1, t2, m = adversarial_min_m(args.d, args.ell, args.mode, args.iters, args.seed)
    print(f"m={m}")
    print("T1", t1.format())
    print("T2", t2.format())
    return 0


def cmd_sweep(args) -> int:
    try:
        cfg = harness.SweepConfig.load(args.config)
        harness.sweep(cfg, args.out_dir, args.workers)
    except (OSError, ValueError) as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rainbowrc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="sample a random r-regular graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-attempts", type=int, default=1000)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("inspect", help="ball classes, short cycles and dense small sets")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k1", type=float, default=2.0)
    s.add_argument("--t0", type=int, default=None)
    s.add_argument("--budget", type=int, default=1_000_000)
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("color", help="random distance-k edge colouring (or --verify one)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k1", type=float, default=2.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--order", choices=("id", "random"), default="id")
    s.add_argument("--out")
    s.add_argument("--patch", action="store_true", help="fresh colours near short cycles")
    s.add_argument("--patch-radius", type=int, default=10)
    s.add_argument("--patch-max-cycle", type=int, default=10)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--coloring", help="colouring file to check with --verify")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="rainbow path search per vertex pair")
    s.add_argument("--graph", required=True)
    s.add_argument("--coloring", required=True)
    s.add_argument("--mode", choices=("exhaustive", "budget", "constructive"), default="budget")
    s.add_argument("--pairs", default="sample:200")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--k1", type=float, default=2.0)
    s.add_argument("--max-len", type=int, default=None)
    s.add_argument("--budget", type=int, default=100_000)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tree-lemma", help="adversarial minimum of rainbow leaf pairs")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--mode", choices=("exhaustive", "search"), default="exhaustive")
    s.add_argument("--iters", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_tree_lemma)

    s = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "color" and not args.verify and not args.out:
        raise SystemExit("color needs --out (or --verify)")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
