#!/usr/bin/env python3
"""Sweep the finite-difference step and show the second-order error decay.

For each corpus entry, prints |fd(h) - exact| over a range of h along with
the observed order log2(err(2h)/err(h)); the plateau near 2 is the
truncation-dominated regime, and the drift at tiny h is binary64 rounding
taking over.

  python3 scripts/fd_convergence.py
"""

import argparse
import math
from fractions import Fraction

from weiljet.calculus import partial_derivative
from weiljet.expression import parse
from weiljet.oracle import finite_difference
from weiljet.suites import FD_CORPUS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=8, help="number of halvings from h0")
    ap.add_argument("--h0", type=float, default=1e-2)
    args = ap.parse_args()

    for text, point, wrt in FD_CORPUS:
        expr = parse(text)
        exact = float(partial_derivative(expr, wrt, [Fraction(v) for v in point]))
        print(f"\n{text}  at {point}, wrt x{wrt}  (exact {exact!r})")
        print(f"{'h':>12}  {'|fd - exact|':>14}  {'order':>6}")
        previous = None
        h = args.h0
        for _ in range(args.steps):
            err = abs(finite_difference(expr, wrt, point, h) - exact)
            if previous and err:
                order = math.log2(previous / err)
                print(f"{h:>12.1e}  {err:>14.3e}  {order:>6.2f}")
            else:
                print(f"{h:>12.1e}  {err:>14.3e}")
            previous = err
            h /= 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
