"""Bounded search for the smallest sum-dominant sets.

Only affine-canonical candidates are examined (min 0, gcd 1), so every hit is a
representative of its affine class. An empty exhaustive result means no
sum-dominant set exists inside the bounds, nothing more.

    python scripts/min_mstd_search.py --max-card 8 --max-diam 14
"""

import argparse
import json

from sumdiff.mstd import search_min_mstd
from sumdiff.intset import stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-card", type=int, default=8)
    ap.add_argument("--max-diam", type=int, default=14)
    ap.add_argument("--budget", type=int, default=10**8)
    args = ap.parse_args()

    res = search_min_mstd(args.max_card, args.max_diam, args.budget)
    rows = []
    for A in res.sets:
        st = stats(A)
        rows.append({"set": list(A.elements), "sum_card": st.sum_card, "diff_card": st.diff_card})
    print(json.dumps({
        "bounds": res.bounds,
        "examined": res.examined,
        "exhaustive": res.exhaustive,
        "min_cardinality": min((len(A) for A in res.sets), default=None),
        "sets": rows,
    }, indent=2))


if __name__ == "__main__":
    main()
