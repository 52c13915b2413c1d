"""Independent Monte-Carlo estimate of the configuration-model simplicity rate.

Pure-Python stub shuffling, no package code. Used to fix the acceptance band
asserted in tests/test_genreg.py.

    python scripts/oracle_acceptance_rate.py --n 1000 --r 4 --attempts 50000
"""

import argparse
import math
import random


def simple_once(n, r, rnd):
    stubs = [v for v in range(n) for _ in range(r)]
    rnd.shuffle(stubs)
    seen = set()
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in seen:
            return False
        seen.add(key)
    return True


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--attempts", type=int, default=50000)
    ap.add_argument("--seed", type=int, default=12345)
    a = ap.parse_args()
    rnd = random.Random(a.seed)
    hits = sum(simple_once(a.n, a.r, rnd) for _ in range(a.attempts))
    p = hits / a.attempts
    se = math.sqrt(p * (1 - p) / a.attempts)
    print(f"p_hat={p:.5f} se={se:.5f} asymptotic={math.exp(-(a.r**2 - 1) / 4):.5f}")


if __name__ == "__main__":
    main()
