#!/usr/bin/env python3
"""Witness search + candidate verification for the three desk-scale
parameter triples, echoing seeds and fractions.

Usage: python scripts/run_conjecture.py [--budget 10000] [--seed 0]
"""

import argparse
import json
import sys
import time

from chiral4.conjecture import build_candidate, search_witness, verify_candidate


def run() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--c3-budget", type=int, default=100_000)
    args = ap.parse_args()
    for (p, e1, e2) in [(3, 3, 5), (7, 3, 5), (11, 3, 7)]:
        t0 = time.time()
        res = search_witness(p, e1, e2, budget=args.budget, seed=args.seed)
        out = {
            "p": p, "e1": e1, "e2": e2, "seed": args.seed,
            "samples": res.samples,
            "fraction_primitive_pairs": round(res.fraction, 4),
            "fraction_unconditioned": round(res.fraction_unconditioned, 4),
            "witness_sample_index": res.witness.sample_index if res.witness else None,
            "seconds": round(time.time() - t0, 1),
        }
        if res.witness and (p, e1, e2) == (3, 3, 5):
            t = build_candidate(res.witness)
            rep = verify_candidate(t, res.witness, c3_budget=args.c3_budget)
            out["verification"] = rep.to_json()
        print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(run())
