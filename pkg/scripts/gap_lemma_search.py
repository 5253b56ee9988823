#!/usr/bin/env python3
"""Search for sets S violating the gap statement, randomly and exhaustively for small X."""

import argparse
import itertools
import random
from collections import Counter

from polyprod.errors import NotApplicable
from polyprod.powersieve import gap_lemma_report


def exhaustive(X: int, K: int):
    """Every S in [1, X] with |S| > X/K that fails; exponential in X."""
    for r in range(X // K + 1, X + 1):
        for S in itertools.combinations(range(1, X + 1), r):
            if not gap_lemma_report(S, X, K)["holds"]:
                yield S


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10**5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--xmax", type=int, default=500)
    ap.add_argument("--exhaustive-x", type=int, default=14)
    args = ap.parse_args()

    for K in (2, 3):
        first = next(exhaustive(args.exhaustive_x, K), None)
        print(f"exhaustive X={args.exhaustive_x} K={K}: first counterexample {first}")

    rng = random.Random(args.seed)
    fails = Counter()
    for _ in range(args.trials):
        X = rng.randint(3, args.xmax)
        K = rng.randint(2, min(10, X - 1))
        S = rng.sample(range(1, X + 1), rng.randint(X // K + 1, X))
        try:
            if not gap_lemma_report(S, X, K)["holds"]:
                fails[K] += 1
        except NotApplicable:
            pass
    print(f"random: {sum(fails.values())} failures in {args.trials} trials, by K: {dict(sorted(fails.items()))}")


if __name__ == "__main__":
    main()
