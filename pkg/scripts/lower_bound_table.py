"""Projections reaching C(n-1, 2) self-intersections of the standard caterpillar.

    python scripts/lower_bound_table.py --max-n 7
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from math import comb

from tropicast.lines import caterpillar, lower_bound_projection, sip_count


@dataclass(frozen=True)
class Config:
    min_n: int = 3
    max_n: int = 6


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-n", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=6)
    a = ap.parse_args(argv)
    cfg = Config(a.min_n, a.max_n)
    print(f"{'n':>3} {'count':>6} {'C(n-1,2)':>9} {'secs':>6}  matrix")
    for n in range(cfg.min_n, cfg.max_n + 1):
        t = time.perf_counter()
        A = lower_bound_projection(n).A
        c = sip_count(caterpillar(n)[0].complex(), A)
        dt = time.perf_counter() - t
        print(f"{n:>3} {c:>6} {comb(n - 1, 2):>9} {dt:>6.2f}  {[list(r) for r in A]}")


if __name__ == "__main__":
    main()
