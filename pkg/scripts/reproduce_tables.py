#!/usr/bin/env python3
"""Re-enumerate both reference tables and diff against the golden copies.

Usage: python scripts/reproduce_tables.py [--max-q 83] [--jobs N] [--skip-169]
"""

import argparse
import sys
import time

from chiral4.cli import main as cli_main


def run():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-q", type=int, default=83)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--skip-169", action="store_true")
    args = ap.parse_args()

    t0 = time.time()
    rc2 = cli_main(["tables", "--reproduce", "2", "--max-q", str(args.max_q),
                    "--jobs", str(args.jobs)])
    print(f"# table 2 sweep: {'OK' if rc2 == 0 else 'MISMATCH'} "
          f"({time.time() - t0:.1f}s)")
    rc1 = 0
    if not args.skip_169:
        t0 = time.time()
        rc1 = cli_main(["tables", "--reproduce", "1", "--jobs", str(args.jobs)])
        print(f"# table 1 (q=169): {'OK' if rc1 == 0 else 'MISMATCH'} "
              f"({time.time() - t0:.1f}s)")
    return max(rc1, rc2)


if __name__ == "__main__":
    sys.exit(run())
