import pytest

from chiral4.classifier import split_prime_power
from chiral4.enumerator import (
    Engine,
    UnsupportedScale,
    enumerate_rank4,
    enumerate_rank4_naive,
    enumerate_rank5,
    table2_row,
)
from chiral4.fields import make_field
from chiral4.polytopes import are_equivalent, dual, enantiomorph, verify_triple
from chiral4.tables import TABLE2_COUNTS


def run(q, group="PSL", jobs=1):
    p, d = split_prime_power(q)
    return enumerate_rank4(make_field(p, d), group, jobs=jobs)


# ---------------------------------------------------------------------------
# counts against the golden table (small tier; the full list is acceptance)

@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32])
def test_counts_match_table2_small(q):
    assert run(q).count == TABLE2_COUNTS[q]


def test_9_to_13_breakdown():
    res = run(13)
    types = sorted(r.schlafli.as_tuple() for r in res.records)
    assert types == [(3, 3, 6), (3, 3, 6), (3, 6, 3), (3, 6, 3), (6, 3, 3), (6, 3, 3)]


# ---------------------------------------------------------------------------
# record validity: every emitted record passes the full object-level
# verification suite independently re-run

@pytest.mark.parametrize("q,group", [(8, "PSL"), (13, "PSL"), (16, "PSL"),
                                     (19, "PSL"), (31, "PSL"), (13, "PGL"),
                                     (9, "PGL")])
def test_records_reverify_independently(q, group):
    res = run(q, group)
    expected = "FullPSL" if group == "PSL" or q % 2 == 0 else "FullPGL"
    for rec in res.records:
        rec2 = verify_triple(rec.triple, expected, provenance="recheck")
        assert rec2 is not None
        assert rec2.schlafli == rec.schlafli
        assert rec2.parabolic1.label() == rec.parabolic1.label()
        assert rec2.parabolic2.label() == rec.parabolic2.label()


# ---------------------------------------------------------------------------
# structural invariants

def test_mirror_pairs_partition():
    res = run(41)
    assert res.count == 38 and res.polytope_count == 19
    seen = set()
    for i, j in res.mirror_pairs:
        assert i not in seen and j not in seen
        seen.update((i, j))
        assert are_equivalent(enantiomorph(res.records[i].triple),
                              res.records[j].triple)
    assert len(seen) == res.count


def test_dual_closure():
    res = run(31)
    for rec in res.records:
        d = dual(rec.triple)
        assert any(are_equivalent(d, other.triple) for other in res.records
                   if other.schlafli == rec.schlafli.reversed())


def test_records_pairwise_inequivalent():
    res = run(19)
    for i in range(res.count):
        for j in range(i + 1, res.count):
            assert not are_equivalent(res.records[i].triple, res.records[j].triple)


def test_determinism_and_jobs():
    a = run(17)
    b = run(17)
    assert [r.sort_key() for r in a.records] == [r.sort_key() for r in b.records]
    c = run(17, jobs=2)
    assert [r.sort_key()[:2] for r in c.records] == [r.sort_key()[:2] for r in a.records]
    assert [r.to_json() for r in c.records] == [r.to_json() for r in a.records]


def test_unsupported_scale():
    with pytest.raises(UnsupportedScale):
        enumerate_rank4(make_field(521), "PSL")


def test_table2_row():
    count, residues, cases = table2_row(13)
    assert count == 6 and residues == (1, 13) and cases == "(3)"


# ---------------------------------------------------------------------------
# pair-classification cross-check: the z-table filter agrees with honest
# closures for every (involution, class-rep) pair

@pytest.mark.parametrize("q,group", [(7, "PSL"), (9, "PSL"), (11, "PSL"),
                                     (13, "PSL"), (7, "PGL"), (13, "PGL")])
def test_pair_filter_matches_closures(q, group):
    from chiral4.enumerator import _mulclose_packed, _theta, _inv4, _mul
    p, d = split_prime_power(q)
    eng = Engine(make_field(p, d), group)
    pf = eng.pf
    for th in eng.sigma2_reps():
        c = pf.companion(th)
        keep = eng._pair_keep_map(c, th)
        zs = eng._theta_tc(c)
        for i, t in enumerate(eng.inv_list):
            els = _mulclose_packed([t, c], pf, eng.full_order + 1)
            proper = len(els) < eng.full_order
            if eng.group == "PGL" and pf.p != 2:
                # a PSL-full parabolic is pruned too (never extends to C3')
                from chiral4.projective import psl_order
                proper = proper and len(els) != psl_order(eng.ctx)
            tc = _mul(t, c, pf)
            m_ord = eng._order_of(tc)
            expected = proper and m_ord >= 3
            assert keep[int(zs[i])] == expected, (q, group, th, i)


# ---------------------------------------------------------------------------
# naive sweep agreement (small tier; full q <= 27 in acceptance)

@pytest.mark.parametrize("q,group", [(8, "PSL"), (13, "PSL"), (5, "PGL"), (9, "PGL")])
def test_naive_matches_pruned_small(q, group):
    p, d = split_prime_power(q)
    ctx = make_field(p, d)
    a = enumerate_rank4(ctx, group)
    b = enumerate_rank4_naive(ctx, group)
    assert sorted(r.sort_key() for r in a.records) == sorted(r.sort_key() for r in b.records)


# ---------------------------------------------------------------------------
# rank 5

@pytest.mark.parametrize("q,group", [(5, "PSL"), (5, "PGL"), (8, "PSL")])
def test_rank5_empty_small(q, group):
    p, d = split_prime_power(q)
    assert enumerate_rank5(make_field(p, d), group) == []


def test_rank5_scale_guard():
    with pytest.raises(UnsupportedScale):
        enumerate_rank5(make_field(17), "PSL")
