"""Compare optimizer minima with closed forms for a grid of (n, d).

Prints one line per pair with the numeric value, the closed form when one is
certified, and the wall time.
"""
import argparse
import time

from temporal_ghz.classical import BoundsConfig, certification, minimize


def main() -> None:
    ap = argparse.ArgumentParser(description="optimizer vs closed-form minima")
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 6, 8])
    ap.add_argument("--restarts", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = BoundsConfig(restarts=args.restarts, seed=args.seed)
    print(f"{'n':>3} {'d':>3} {'numeric':>14} {'closed':>14} {'gap':>10}  {'time':>6}  label")
    for n in args.n:
        for d in args.d:
            t0 = time.perf_counter()
            res = minimize(n, d, cfg)
            dt = time.perf_counter() - t0
            closed, label = certification(n, d)
            gap = "" if closed is None else f"{res.best_value - closed:.2e}"
            shown = "" if closed is None else f"{closed:.10f}"
            print(f"{n:>3} {d:>3} {res.best_value:>14.10f} {shown:>14} {gap:>10}  {dt:6.2f}  {label}")


if __name__ == "__main__":
    main()
