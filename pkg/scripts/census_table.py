"""Tabulate f(n), the number of sum-dominant subsets of [0, n-1], for a range of n.

    python scripts/census_table.py --n-min 1 --n-max 22 --shards 8 --workers 4

Values are finite evaluations. The ratio column is printed for inspection and
says nothing about a limit.
"""

import argparse
import csv
import sys
import time

from sumdiff.census import census


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=1)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--shards", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--per-k", action="store_true", help="emit one row per (n, k) instead of per n")
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    if args.per_k:
        out.writerow(["n", "k", "total", "sum_dominant", "balanced", "diff_dominant"])
    else:
        out.writerow(["n", "f_n", "f_n_over_2n", "seconds"])
    for n in range(args.n_min, args.n_max + 1):
        t0 = time.perf_counter()
        res = census(n, shards=args.shards, workers=args.workers)
        secs = time.perf_counter() - t0
        if args.per_k:
            for row in res.csv_rows():
                out.writerow([n, *row])
        else:
            out.writerow([n, res.f_n, f"{res.f_n / 2 ** n:.6g}", f"{secs:.2f}"])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
