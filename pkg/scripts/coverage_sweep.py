#!/usr/bin/env python3
"""Sweep the covering pipeline over degree ratios, orders, and seeds.

Writes one CSV row per trial (same schema as `pathcover bench`) plus a
per-cell success summary on stderr. Typical runs:

    python scripts/coverage_sweep.py --out sweep.csv
    python scripts/coverage_sweep.py --c 0.3,0.45 --n 600 --seeds 0..49 --bipartite
"""

import argparse
import sys
from collections import defaultdict

from pathcover.cli import CSV_HEADER, _parse_list, _parse_seed_range, _run_trial


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", default="0.3,0.45,0.6")
    ap.add_argument("--n", default="200,600")
    ap.add_argument("--seeds", default="0..49")
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--bipartite", action="store_true")
    ap.add_argument("--timing", choices=("wall", "none"), default="wall")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    family = "random-bipartite-regular" if args.bipartite else "random-regular"
    cells = defaultdict(lambda: [0, 0])
    rows = [CSV_HEADER]
    for c in _parse_list(args.c, float):
        for n in _parse_list(args.n, int):
            for seed in _parse_seed_range(args.seeds):
                row = _run_trial(family, n, c, args.alpha, seed, args.timing)
                rows.append(row.to_csv())
                cells[(c, n)][0] += row.success
                cells[(c, n)][1] += 1
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    worst = 1.0
    for (c, n), (ok, total) in sorted(cells.items()):
        rate = ok / total
        worst = min(worst, rate)
        print(f"c={c} n={n}: {ok}/{total} ({rate:.0%})", file=sys.stderr)
    return 0 if worst >= 0.9 else 1


if __name__ == "__main__":
    sys.exit(main())
