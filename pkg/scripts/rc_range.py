"""Values of rc(S, w) over all full w up to a complexity bound.

    python3 scripts/rc_range.py perforated:6 --bound 4
    python3 scripts/rc_range.py "directsum:perforated:3|perforated:5" --bound 3
"""

import argparse

from curank.harness import parse_model_spec
from curank.radius import rc_range_sample


def main() -> None:
    p = argparse.ArgumentParser(description="sample the range of the radius of comparison")
    p.add_argument("model", help="model spec, e.g. perforated:4 or pointfn:p,q")
    p.add_argument("--bound", type=int, default=4)
    args = p.parse_args()

    S = parse_model_spec(args.model)
    values = sorted(rc_range_sample(S, args.bound))
    print(f"{S.describe()}, bound {args.bound}: {len(values)} values")
    print("  " + ", ".join(str(v) for v in values))


if __name__ == "__main__":
    main()
