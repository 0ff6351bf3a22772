"""Survey the continuity-of-rank conditions on random full spectral profiles.

Counts how often the rank is continuous, checks that the four conditions
agree, and lists the distinct omega values seen.
"""

import argparse
import random
from collections import Counter

from curank.harness import random_profile
from curank.oscillation import contrank_check


def main() -> None:
    p = argparse.ArgumentParser(description="continuity-of-rank survey")
    p.add_argument("--cases", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--breakpoints", type=int, default=3)
    args = p.parse_args()

    rng = random.Random(args.seed)
    continuous, omegas, disagreements = Counter(), Counter(), []
    for i in range(args.cases):
        a = random_profile(rng, full=True, bounded_below=i % 2 == 1, breakpoints=args.breakpoints, normalized=True)
        rep = contrank_check(a, strict=False)
        continuous[rep.rank_continuous] += 1
        omegas[str(rep.omega)] += 1
        if not rep.agree:
            disagreements.append((str(a), rep.conditions))

    print(f"{args.cases} profiles, seed {args.seed}")
    print(f"  continuous rank: {continuous[True]}, discontinuous: {continuous[False]}")
    print("  omega values: " + ", ".join(f"{v} x{n}" for v, n in sorted(omegas.items())))
    print(f"  disagreements: {len(disagreements)}")
    for a, cond in disagreements[:5]:
        print(f"    {a}: {cond}")


if __name__ == "__main__":
    main()
