"""Golden copies of the two reference tables, and comparison helpers.

TABLE2 rows: (q, count or None for '?', q mod 4 or None, q mod 20 or None,
case labels).  The residue columns are blank for even q, as printed in the
source; the fourth column holds q mod 20.

TABLE1 rows (q = 169): (schlafli, class count, facet class, vertex class),
one orientation per dual pair; types with an asymmetric symbol stand for
their mirror-orientation duals as well.
"""

from __future__ import annotations

TABLE2: list[tuple] = [
    (4, 0, None, None, ""),
    (5, 0, 1, 5, ""),
    (7, 0, 3, 7, ""),
    (8, 2, None, None, "(2)"),
    (9, 0, 1, 9, ""),
    (11, 0, 3, 11, ""),
    (13, 6, 1, 13, "(3)"),
    (16, 2, None, None, "(2)"),
    (17, 10, 1, 17, "(3)"),
    (19, 4, 3, 19, "(b)"),
    (23, 0, 3, 3, ""),
    (25, 2, 1, 5, "(3)"),
    (27, 0, 3, 7, ""),
    (29, 10, 1, 9, "(3)"),
    (31, 6, 3, 11, "(d)(e)"),
    (32, 6, None, None, "(2)"),
    (37, 12, 1, 17, "(3)"),
    (41, 38, 1, 1, "(3)"),
    (43, 0, 3, 3, ""),
    (47, 0, 3, 7, ""),
    (49, 16, 1, 9, "(3)"),
    (53, 12, 1, 13, "(3)"),
    (59, 6, 3, 19, "(a)(d)"),
    (61, 44, 1, 1, "(3)"),
    (64, 12, None, None, "(2)"),
    (67, 0, 3, 7, ""),
    (71, 10, 3, 11, "(a)(d)(e)"),
    (73, 38, 1, 13, "(3)"),
    (79, 8, 3, 19, "(b)(d)(e)"),
    (81, 6, 1, 1, "(3)"),
    (83, 0, 3, 3, ""),
    (89, 46, 1, 9, "(3)"),
    (97, 56, 1, 17, "(3)"),
    (101, 42, 1, 1, "(3)"),
    (109, 42, 1, 9, "(3)"),
    (113, 52, 1, 13, "(3)"),
    (121, 16, 1, 1, "(3)"),
    (125, 10, 1, 5, "(3)"),
    (128, 18, None, None, "(2)"),
    (131, 6, 3, 11, "(c)"),
    (137, 54, 1, 17, "(3)"),
    (139, 2, 3, 19, "(b)"),
    (149, 38, 1, 9, "(3)"),
    (151, 8, 3, 11, "(b)(d)(e)"),
    (157, 42, 1, 17, "(3)"),
    (169, 44, 1, 9, "(3)"),
    (173, 42, 1, 13, "(3)"),
    (179, 2, 3, 19, "(d)"),
    (181, None, 1, 1, "(3)"),
    (191, None, 3, 11, "(c)(e)"),
    (193, None, 1, 13, "(3)"),
    (197, None, 1, 17, "(3)"),
    (199, None, 3, 19, "(a)(c)(e)"),
    (211, None, 3, 11, "(b)(d)"),
    (223, None, 3, 3, ""),
    (227, None, 3, 7, ""),
    (229, None, 1, 9, "(3)"),
    (233, None, 1, 13, "(3)"),
    (239, None, 3, 19, "(b)(c)(e)"),
    (241, None, 1, 1, "(3)"),
    (243, None, 3, 3, ""),
    (251, None, 3, 11, "(a)(c)"),
]

TABLE2_COUNTS: dict[int, int] = {q: c for q, c, _, _, _ in TABLE2 if c is not None}

TABLE1: list[tuple] = [
    ((4, 3, 5), 2, "S4", "A5"),
    ((6, 3, 5), 2, "E_13:C_6", "A5"),
    ((7, 3, 5), 2, "PSL(2,13)", "A5"),
    ((13, 3, 5), 2, "PSL(2,13)", "A5"),
    ((14, 3, 5), 2, "PGL(2,13)", "A5"),
    ((21, 42, 21), 6, "E_169:C_42", "E_169:C_42"),
    ((28, 28, 28), 6, "E_169:C_28", "E_169:C_28"),
    ((84, 84, 84), 12, "E_169:C_84", "E_169:C_84"),
]


def normalize_row(schlafli: tuple, par1: str, par2: str) -> tuple:
    """Canonical orientation of a dual pair: the lexicographically smaller
    of (type, par1, par2) and its reversal."""
    fwd = (tuple(schlafli), par1, par2)
    rev = (tuple(reversed(schlafli)), par2, par1)
    return min(fwd, rev)


def table1_expected_multiset() -> dict[tuple, int]:
    """Normalized (type, par1, par2) -> record count, duals expanded."""
    out: dict[tuple, int] = {}
    for schl, count, par1, par2 in TABLE1:
        key = normalize_row(schl, par1, par2)
        out[key] = out.get(key, 0) + count
        if tuple(reversed(schl)) != tuple(schl):
            out[key] = out[key] + count  # the mirror-orientation duals
    return out


def records_multiset(records) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for rec in records:
        key = normalize_row(rec.schlafli.as_tuple(), rec.parabolic1.label(),
                            rec.parabolic2.label())
        out[key] = out.get(key, 0) + 1
    return out


def table2_csv(rows: list[tuple]) -> str:
    lines = ["q,count,q mod 4,q mod 20,cases"]
    for q, count, q4, q20, cases in rows:
        lines.append(f"{q},{'?' if count is None else count},"
                     f"{'' if q4 is None else q4},{'' if q20 is None else q20},{cases}")
    return "\n".join(lines) + "\n"


def diff_table2(computed: dict[int, int], q_max: int) -> list[str]:
    """Row-level differences between computed counts and the golden table."""
    out = []
    for q, count, _, _, _ in TABLE2:
        if q > q_max or count is None:
            continue
        if q not in computed:
            out.append(f"q={q}: missing computed value (expected {count})")
        elif computed[q] != count:
            out.append(f"q={q}: computed {computed[q]} != expected {count}")
    return out
