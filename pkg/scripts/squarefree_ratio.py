#!/usr/bin/env python3
"""log(squarefree part of N_x) / log|N_x| along x; a statistic, nothing is asserted."""

import argparse

from polyprod.ledger import FactorLedger
from polyprod.polycore import parse_factored, parse_poly


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--poly", default="1,0,1")
    ap.add_argument("--xmax", type=int, default=20000)
    ap.add_argument("--every", type=int, default=1000)
    args = ap.parse_args()
    F = parse_factored(args.poly) if any(c in args.poly for c in ";^=/") else parse_poly(args.poly)
    L = FactorLedger(F)
    print("x,ratio")
    for vf in L.steps(args.xmax):
        if vf.n % args.every == 0:
            print(f"{vf.n},{L.squarefree_part_statistic():.6f}")


if __name__ == "__main__":
    main()
