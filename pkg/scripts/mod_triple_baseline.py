"""For each modulus m, the first subsets of Z/mZ with |f(A)| > |g(A)|, |f(B)| < |g(B)| and |f(C)| = |g(C)|.

The scan is exhaustive over all 2^m subsets, so a missing slot means no such
subset exists for that m. The default pair is x+y against x-y.

    python scripts/mod_triple_baseline.py --m-max 14
    python scripts/mod_triple_baseline.py --f "x^2+y" --g "x-y^2" --m-max 10
"""

import argparse
import json

from sumdiff.poly import find_mod_triple, parse_poly


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", default="x+y")
    ap.add_argument("--g", default="x-y")
    ap.add_argument("--m-min", type=int, default=2)
    ap.add_argument("--m-max", type=int, default=14)
    args = ap.parse_args()

    f, g = parse_poly(args.f).poly, parse_poly(args.g).poly
    for m in range(args.m_min, args.m_max + 1):
        t = find_mod_triple(f, g, m, max_subsets=1 << args.m_max)
        slot = lambda S: list(S.residues) if S is not None else None  # noqa: E731
        print(json.dumps({"m": m, "A": slot(t.A), "B": slot(t.B), "C": slot(t.C), "exhaustive": t.exhaustive}),
              flush=True)


if __name__ == "__main__":
    main()
