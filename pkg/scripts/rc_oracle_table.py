"""Print rc(Perforated(k), w) next to an exhaustive-search lower bound.

    python3 scripts/rc_oracle_table.py --kmax 6 --wmax 4 --bound 30
"""

import argparse
import time
from fractions import Fraction

from curank.models import PerforatedModel
from curank.radius import rc_exact, rc_search
from curank.scalar import ExtScalar


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--wmax", type=int, default=4)
    p.add_argument("--bound", type=int, default=30)
    p.add_argument("--denominator", type=int, default=12)
    args = p.parse_args()

    print(f"{'k':>2} {'w':>2} {'exact':>6} {'search':>6} {'clear from':>10} certificate")
    start = time.perf_counter()
    for k in range(2, args.kmax + 1):
        S = PerforatedModel(k)
        grid = [Fraction(j, args.denominator) for j in range(1, args.denominator * k + 1)]
        for w in range(1, args.wmax + 1):
            exact = rc_exact(S, ExtScalar(w)).value
            res = rc_search(S, ExtScalar(w), args.bound, grid)
            cert = f"x={res.certificate.x} y={res.certificate.y}" if res.certificate else "-"
            flag = "" if res.value == exact else "  <- differs"
            print(f"{k:>2} {w:>2} {str(exact):>6} {str(res.value):>6} {str(res.clear_from):>10} {cert}{flag}")
    print(f"done in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
