"""Extend the degree-1 identity path and print the error against (t-s)^|τ|/τ!."""

import argparse
from fractions import Fraction
from itertools import combinations

from branched_decay.extension import TruncatedPath, extend
from branched_decay.trees import enumerate_trees_upto


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=4)
    ap.add_argument("--level", type=int, default=12)
    ap.add_argument("--denominator", type=int, default=4)
    args = ap.parse_args()
    X = TruncatedPath.identity(1)
    times = [i / args.denominator for i in range(args.denominator + 1)]
    print(f"{'s':>6} {'t':>6} {'tree':<14} {'value':>14} {'abs err':>10}")
    for s, t in combinations(times, 2):
        res = extend(X, args.M, s, t, tol=1e-8, min_level=args.level, max_level=args.level,
                     strict=False)
        for tr in enumerate_trees_upto(args.M):
            want = float(Fraction(t - s) ** tr.size / tr.factorial)
            got = res.values[tr]
            print(f"{s:6.3f} {t:6.3f} {tr.notation():<14} {got:14.10f} {abs(got - want):10.2e}")


if __name__ == "__main__":
    main()
