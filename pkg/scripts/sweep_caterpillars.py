"""Random generic projections of random lines, tallied against C(n-1, 2).

    python scripts/sweep_caterpillars.py --n 3 4 5 --trials 200 --seed 0 [--family any] [--csv out.csv]
"""

from __future__ import annotations

import argparse
import csv
from collections import Counter
from dataclasses import dataclass, field

from tropicast.lines import sweep


@dataclass(frozen=True)
class Config:
    ns: tuple[int, ...] = (3, 4, 5)
    trials: int = 200
    seed: int = 0
    family: str = "caterpillar"
    csv_path: str | None = None


def run(cfg: Config) -> list[dict]:
    rows = []
    for n in cfg.ns:
        got = sweep(n, cfg.trials, cfg.seed, cfg.family)
        hist = Counter(r["count"] for r in got)
        bad = sum(1 for r in got if not r["ok"])
        print(f"n={n} bound={got[0]['bound']} histogram={dict(sorted(hist.items()))} over-bound={bad}")
        rows += got
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--family", choices=["caterpillar", "any"], default="caterpillar")
    ap.add_argument("--csv")
    a = ap.parse_args(argv)
    cfg = Config(tuple(a.n), a.trials, a.seed, a.family, a.csv)
    rows = run(cfg)
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["n", "trial", "count", "bound", "ok"])
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
