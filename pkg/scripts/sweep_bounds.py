"""Tabulate qubit and continuous classical minima over a range of n.

    python3 scripts/sweep_bounds.py --n-min 4 --n-max 40 --out sweep.csv
"""
import argparse
import sys

from temporal_ghz.classical import sweep, write_sweep_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = sweep(args.n_min, args.n_max, {"qubit", "continuous"})
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            write_sweep_csv(rows, fh)
    else:
        write_sweep_csv(rows, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
