"""Decay-bound checks on exact lifts and the crossover n0 against the geometric bound."""

import argparse

from branched_decay.bounds import branched_vs_geometric
from branched_decay.experiments import decay_reports


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=6)
    ap.add_argument("--gammas", default="0.55,0.6,0.75,0.9")
    args = ap.parse_args()
    for r in decay_reports(args.max_size):
        print(r.summary())
    print(f"\n{'gamma':>6} {'log n0':>12} {'n0':>12}")
    for g in map(float, args.gammas.split(",")):
        out = branched_vs_geometric(g)
        if out["exists"]:
            print(f"{g:6.3f} {out['log_n0']:12.3f} {out['n0']:12.4e}")
        else:
            print(f"{g:6.3f} {'-':>12} {out.get('reason', 'none')}")


if __name__ == "__main__":
    main()
