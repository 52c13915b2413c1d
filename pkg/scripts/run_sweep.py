"""Run a sweep and print the aggregate table plus a witness recheck.

    python3 scripts/run_sweep.py configs/desk_sweep.json out/ --workers 4
"""

import argparse
import sys
import time

from rainbowrc.harness import SweepConfig, load_trials, recheck_witnesses, sweep


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("out_dir")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--no-recheck", action="store_true")
    args = ap.parse_args()

    cfg = SweepConfig.load(args.config)
    if cfg.experimental_cells:
        print(f"note: experimental r=3 cells {cfg.experimental_cells}", file=sys.stderr)
    t = time.perf_counter()
    _, rows = sweep(cfg, args.out_dir, args.workers)
    print(f"{len(cfg.cells) * cfg.trials} trials in {time.perf_counter() - t:.1f}s")
    for row in rows:
        print(f"n={row['n']:>6} r={row['r']} K1={row['K1']}  success={row['success_rate']}"
              f"  diam/log={row['mean_diameter_ratio']}  colours={row['mean_colors_used']}")
    if not args.no_recheck:
        recs = load_trials(f"{args.out_dir}/trials.jsonl")
        bad = [r for r in recs if not recheck_witnesses(r, cfg)]
        print(f"witness recheck: {len(recs) - len(bad)}/{len(recs)} ok")
        return 1 if bad else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
