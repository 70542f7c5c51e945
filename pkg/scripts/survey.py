#!/usr/bin/env python3
"""Arithmetic-only classification survey: for each prime power q, the
predicted count (exact for q = p = 3 mod 4, blank where only partial),
residues, and matched cases.

Usage: python scripts/survey.py [MAX_Q]
"""

import sys

from chiral4.classifier import survey_rows, witness_discrepancies


def run(max_q: int = 251) -> int:
    print("q,count,q mod 4,q mod 20,cases")
    for q, total, q4, q20, cases in survey_rows(max_q):
        count = "" if total is None else total
        print(f"{q},{count},{'' if q4 is None else q4},"
              f"{'' if q20 is None else q20},{cases}")
    d = witness_discrepancies()
    if d:
        print(f"# non-redundancy witness discrepancies (computed, reported): {d}")
    return 0


if __name__ == "__main__":
    sys.exit(run(int(sys.argv[1]) if len(sys.argv) > 1 else 251))
