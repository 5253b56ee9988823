#!/usr/bin/env python3
"""K_x / ((beta - alpha) pi(x)) on a geometric grid of x, as CSV."""

import argparse
import csv
import sys

from polyprod.equidist import dfit_count
from polyprod.modarith import PrimeSieve
from polyprod.polycore import parse_poly


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--poly", default="1,0,1", help="ascending coefficients of an irreducible quadratic")
    ap.add_argument("--xmax", type=int, default=10**6)
    ap.add_argument("--windows", default="0:1,0:0.5,0.5:1,0.25:0.75")
    args = ap.parse_args()
    f = parse_poly(args.poly)
    windows = [tuple(float(v) for v in w.split(":")) for w in args.windows.split(",")]
    sieve = PrimeSieve(args.xmax)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "alpha", "beta", "K", "ratio"])
    x = 100
    while x <= args.xmax:
        for a, b in windows:
            K, r = dfit_count(f, x, a, b, sieve=sieve)
            w.writerow([x, a, b, K, f"{r:.6f}"])
        x *= 10


if __name__ == "__main__":
    main()
