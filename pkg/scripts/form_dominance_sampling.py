"""Sample random subsets of [0, n-1] and tally how often |f(A)| beats |g(A)|.

This is a finite-sample report for a pair of binary forms. It estimates
proportions at one n; it does not speak to what happens as n grows.

    python scripts/form_dominance_sampling.py --f 1,1 --g 1,-1 --n 30 --samples 20000
    python scripts/form_dominance_sampling.py --f 3,2 --g 3,-2 --n 20 --n 40 --n 80
"""

import argparse
import json
import random

from sumdiff.forms import BinaryForm, image_card, normalize, parse_coeffs
from sumdiff.intset import IntSet


def sample(f: BinaryForm, g: BinaryForm, n: int, samples: int, rng: random.Random) -> dict:
    tally = {"f_larger": 0, "equal": 0, "g_larger": 0}
    for _ in range(samples):
        A = IntSet.from_mask(rng.getrandbits(n))
        cf, cg = image_card(f, A), image_card(g, A)
        tally["f_larger" if cf > cg else "g_larger" if cf < cg else "equal"] += 1
    return {"n": n, "samples": samples, **tally, **{f"{k}_share": v / samples for k, v in tally.items()}}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", default="1,1")
    ap.add_argument("--g", default="1,-1")
    ap.add_argument("--n", type=int, action="append")
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    f, g = (normalize(BinaryForm(*parse_coeffs(s))) for s in (args.f, args.g))
    rng = random.Random(args.seed)
    for n in args.n or [30]:
        row = sample(f, g, n, args.samples, rng)
        print(json.dumps({"f": str(f), "g": str(g), "seed": args.seed, **row}), flush=True)


if __name__ == "__main__":
    main()
