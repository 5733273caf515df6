"""Tabulate spline cascade error against refinement level.

For each (r, d) pair the cascade is compared with exact B-spline
derivative samples; the printed error is the worst absolute deviation
per component.  The r = 1 column is exactly zero at every level because
the hat function is piecewise linear on the dyadic grid.
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hermiteforge import check_spline_cascade


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", default="1,1 2,2 3,3 4,3",
                    help="space-separated r,d pairs")
    ap.add_argument("--levels", default="6,8,11",
                    help="comma-separated refinement levels")
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args(argv)

    pairs = [tuple(int(x) for x in t.split(",")) for t in args.pairs.split()]
    levels = [int(t) for t in args.levels.split(",")]

    print(f"{'r':>3} {'d':>3} {'level':>6} {'max error':>12} {'ok':>4} {'secs':>7}")
    for r, d in pairs:
        for lv in levels:
            t0 = time.perf_counter()
            rep = check_spline_cascade(r, d, levels=lv, tol=args.tol)
            dt = time.perf_counter() - t0
            worst = max(rep.errors)
            print(f"{r:>3} {d:>3} {lv:>6} {worst:>12.3e} "
                  f"{str(rep.ok):>4} {dt:>7.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
