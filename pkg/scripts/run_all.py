"""Run every suite and experiment, writing JSON reports to a directory."""

import argparse
import sys

from branched_decay.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--max-tree", type=int, default=7)
    args = ap.parse_args()
    return cli_main(["all", "--max-tree", str(args.max_tree), "-o", args.out])


if __name__ == "__main__":
    sys.exit(main())
