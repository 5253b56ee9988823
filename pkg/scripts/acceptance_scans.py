#!/usr/bin/env python3
"""Print the PASS/FAIL line of every acceptance criterion (or a chosen subset)."""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from test_acceptance import CRITERIA, report  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("criteria", nargs="*", type=int, help="criterion numbers (default: all)")
    args = ap.parse_args()
    failed = 0
    for n in args.criteria or sorted(CRITERIA):
        ok, detail = CRITERIA[n]()
        failed += not ok
        print(report(n, ok, detail), flush=True)
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
