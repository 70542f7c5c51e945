"""Command-line front end: classify, construct, enumerate, verify,
conjecture, tables.

Exit codes: 0 success, 1 usage error, 2 verification mismatch against the
golden tables.
"""

from __future__ import annotations

import argparse
import json
import sys


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="chiral4", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, field=True, group=True):
        if field:
            sp.add_argument("--field", required=True,
                            help="p, p^d, or p^d/c0,c1,...,cd")
            sp.add_argument("--modulus",
                            help="modulus coefficients c0,c1,...,cd (constant first)")
        if group:
            sp.add_argument("--group", choices=["psl", "pgl"], default="psl")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="text")

    sp = sub.add_parser("classify", help="arithmetic existence classification")
    add_common(sp)
    sp.add_argument("--survey", type=int, metavar="N",
                    help="emit survey rows for all prime powers 4..N")

    sp = sub.add_parser("construct", help="build an explicit family")
    add_common(sp)
    sp.add_argument("--family", required=True,
                    choices=["pgl", "psl", "534", "535", "353"])
    sp.add_argument("--k", type=int, help="restrict affine families to one k")

    sp = sub.add_parser("enumerate", help="exhaustive search")
    add_common(sp)
    sp.add_argument("--rank", type=int, choices=[4, 5], default=4)
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("verify", help="re-verify a triple from a JSON file")
    sp.add_argument("--triple", required=True, help="JSON file with s1,s2,s3")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=["json", "text"], default="text")

    sp = sub.add_parser("conjecture", help="large-field witness search")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--e1", type=int, required=True)
    sp.add_argument("--e2", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--c3-budget", type=int, default=100_000)
    sp.add_argument("--skip-verify", action="store_true",
                    help="witness search only")
    sp.add_argument("--out")

    sp = sub.add_parser("tables", help="reproduce the reference tables")
    sp.add_argument("--reproduce", type=int, choices=[1, 2], required=True)
    sp.add_argument("--max-q", type=int, default=83)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    return p


def _parse_ctx(args):
    from chiral4.fields import parse_field
    spec = args.field
    if getattr(args, "modulus", None):
        spec = spec.split("/")[0] + "/" + args.modulus
    return parse_field(spec)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_classify(args) -> int:
    from chiral4.classifier import classify, survey_rows
    from chiral4.tables import table2_csv
    if args.survey:
        rows = survey_rows(args.survey)
        _emit(table2_csv(rows), args.out)
        return 0
    ctx = _parse_ctx(args)
    rep = classify(ctx.q, args.group.upper())
    if args.format == "json":
        _emit(json.dumps(rep.to_json(), indent=2) + "\n", args.out)
    else:
        lines = [f"{args.group.upper()}(2,{rep.q}): {rep.exists}"
                 f"  cases {rep.cases_string() or '-'}"]
        if rep.exists == "unresolved":
            lines.append("unresolved (Conjecture case 3): "
                         "d > 1 is not a prime power")
        for fam, cnt in sorted(rep.family_counts.items()):
            lines.append(f"  {fam}: {cnt}")
        if rep.partial:
            lines.append("  (family counts are a lower bound: PARTIAL)")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _record_lines(records, fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r.to_json()) + "\n" for r in records)
    out = []
    for r in records:
        out.append(f"{r.schlafli}  {r.parabolic1.label()} | {r.parabolic2.label()}"
                   f"  {r.group.label()}  ({r.provenance})")
    return "\n".join(out) + ("\n" if out else "")


def _cmd_construct(args) -> int:
    from chiral4.constructions import (
        build_family_353, build_family_534, build_family_535,
        family_triples, pgl_family, psl_family)
    from chiral4.polytopes import verify_triple
    ctx = _parse_ctx(args)
    if args.family in ("pgl", "psl"):
        fam = pgl_family(ctx) if args.family == "pgl" else psl_family(ctx)
        records = []
        for entry in fam:
            if args.k and entry.k != args.k:
                continue
            for t in family_triples(ctx, entry):
                rec = verify_triple(
                    t, "FullPGL" if args.family == "pgl" else "FullPSL",
                    provenance=f"affine family k={entry.k}")
                assert rec is not None
                records.append(rec)
        _emit(_record_lines(records, args.format), args.out)
        return 0
    builder = {"534": build_family_534, "535": build_family_535,
               "353": build_family_353}[args.family]
    res = builder(ctx)
    text = _record_lines(res.records, args.format)
    if args.format == "text" and res.rejected_regular:
        text += f"# rejected as regular: {len(res.rejected_regular)}\n"
    _emit(text, args.out)
    return 0


def _cmd_enumerate(args) -> int:
    from chiral4.enumerator import enumerate_rank4, enumerate_rank5
    ctx = _parse_ctx(args)
    if args.rank == 5:
        quads = enumerate_rank5(ctx, args.group.upper())
        if args.format == "json":
            _emit(json.dumps({"rank": 5, "count": len(quads)}) + "\n", args.out)
        else:
            _emit(f"rank-5 chiral polytopes for {args.group.upper()}(2,{ctx.q}): "
                  f"{len(quads)}\n", args.out)
        return 0
    res = enumerate_rank4(ctx, args.group.upper(), jobs=args.jobs)
    text = _record_lines(res.records, args.format)
    if args.format == "text":
        text += (f"# {res.count} records ({res.polytope_count} enantiomorphic pairs), "
                 f"convention: {res.plan.convention}\n")
    _emit(text, args.out)
    return 0


def _cmd_verify(args) -> int:
    from chiral4.fields import parse_field
    from chiral4.polytopes import (
        RotationTriple, check_generation, check_intersection, check_relations,
        is_chiral, schlafli_of, verify_triple)
    from chiral4.projective import ProjElement
    with open(args.triple) as fh:
        obj = json.load(fh)
    ctx = parse_field(obj["field"])
    t = RotationTriple(ProjElement.from_json(obj["s1"], ctx),
                       ProjElement.from_json(obj["s2"], ctx),
                       ProjElement.from_json(obj["s3"], ctx))
    group = "Full" + obj.get("group", "PSL").upper()
    rec = verify_triple(t, group, provenance="verified")
    if rec is not None:
        out = f"CHIRAL, type {rec.schlafli}, group {rec.group.label()}\n"
        if args.format == "json":
            out = json.dumps({"verdict": "chiral", **rec.to_json()}) + "\n"
        _emit(out, args.out)
        return 0
    checks = {
        "relations": check_relations(t),
        "intersection": check_intersection(t),
        "generation": check_generation(t, group),
    }
    if all(checks.values()):
        checks["chiral"] = is_chiral(t, precheck=False)
    failed = sorted(k for k, v in checks.items() if not v)
    out = f"NOT CHIRAL, type {schlafli_of(t)}: fails {', '.join(failed)}\n"
    if args.format == "json":
        out = json.dumps({"verdict": "not chiral", "failed": failed}) + "\n"
    _emit(out, args.out)
    return 0


def _cmd_conjecture(args) -> int:
    from chiral4.conjecture import build_candidate, search_witness, verify_candidate
    res = search_witness(args.p, args.e1, args.e2, budget=args.budget,
                         seed=args.seed)
    blob = {
        "p": args.p, "e1": args.e1, "e2": args.e2,
        "seed": res.seed, "samples": res.samples,
        "fraction_primitive_pairs": res.fraction,
        "fraction_unconditioned": res.fraction_unconditioned,
        "witness_found": res.witness is not None,
    }
    if res.witness is not None:
        w = res.witness
        blob["witness"] = {
            "sample_index": w.sample_index,
            "j1": repr(w.j1), "j2": repr(w.j2),
            "omega1": repr(w.omega1), "omega2": repr(w.omega2),
            "Omega": repr(w.omega_big), "field": w.lcm_ctx.name(),
        }
        if not args.skip_verify:
            t = build_candidate(w)
            rep = verify_candidate(t, w, c3_budget=args.c3_budget)
            blob["verification"] = rep.to_json()
    _emit(json.dumps(blob, indent=2) + "\n", args.out)
    return 0


def _cmd_tables(args) -> int:
    from chiral4.classifier import classify, split_prime_power
    from chiral4.enumerator import enumerate_rank4
    from chiral4.fields import make_field
    from chiral4.tables import (
        TABLE1, TABLE2, diff_table2, records_multiset, table1_expected_multiset,
        table2_csv)
    if args.reproduce == 1:
        res = enumerate_rank4(make_field(13, 2), "PSL", jobs=args.jobs)
        got = records_multiset(res.records)
        exp = table1_expected_multiset()
        lines = ["type,count,facet,vertex-figure"]
        for schl, count, par1, par2 in TABLE1:
            lines.append(f"\"[{','.join(map(str, schl))}]\",{count},{par1},{par2}")
        lines.append(f"# records: {res.count} (expected 44)")
        diffs = [f"{k}: got {got.get(k, 0)} expected {v}"
                 for k, v in sorted(exp.items()) if got.get(k, 0) != v]
        diffs += [f"{k}: unexpected {v}" for k, v in sorted(got.items())
                  if k not in exp]
        _emit("\n".join(lines + diffs) + "\n", args.out)
        return 2 if diffs or res.count != 44 else 0
    rows = []
    computed = {}
    for q, count, _, _, _ in TABLE2:
        if q > args.max_q:
            continue
        if count is None:
            continue
        p, d = split_prime_power(q)
        res = enumerate_rank4(make_field(p, d), "PSL", jobs=args.jobs)
        computed[q] = res.count
        rep = classify(q, "PSL")
        q4 = q % 4 if p != 2 else None
        q20 = q % 20 if p != 2 else None
        rows.append((q, res.count, q4, q20, rep.cases_string()))
    text = table2_csv(rows)
    diffs = diff_table2(computed, args.max_q)
    if diffs:
        text += "".join(f"# MISMATCH {line}\n" for line in diffs)
    _emit(text, args.out)
    return 2 if diffs else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "classify": _cmd_classify,
        "construct": _cmd_construct,
        "enumerate": _cmd_enumerate,
        "verify": _cmd_verify,
        "conjecture": _cmd_conjecture,
        "tables": _cmd_tables,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
