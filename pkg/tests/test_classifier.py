import pytest

from chiral4.classifier import (
    NotAPrimePower,
    classify,
    predicted_counts,
    smallest_witnesses,
    split_prime_power,
    survey_rows,
)
from chiral4.tables import TABLE2


def test_split_prime_power():
    assert split_prime_power(169) == (13, 2)
    assert split_prime_power(128) == (2, 7)
    with pytest.raises(NotAPrimePower):
        split_prime_power(12)


def test_classify_31():
    rep = classify(31, "PSL")
    assert rep.exists == "yes"
    assert rep.matched_cases == ["4d", "4e"]
    assert rep.total() == 6


def test_classify_23_no():
    rep = classify(23, "PSL")
    assert rep.exists == "no" and rep.matched_cases == []
    assert rep.total() == 0


def test_classify_131_case_c_only():
    rep = classify(131, "PSL")
    assert rep.exists == "yes"
    assert rep.matched_cases == ["4c"]
    # count includes the two [3,5,3] classes at p = 10 mod 11
    assert rep.family_counts == {"[3,5,3]": 2, "[5,3,5]": 4}
    assert rep.total() == 6


def test_classify_19():
    rep = classify(19, "PSL")
    assert rep.matched_cases == ["4b"]
    assert rep.family_counts == {"[3,5,3]": 2, "[5,3,5]": 2}


def test_classify_pgl():
    assert classify(8, "PGL").exists == "yes"
    assert classify(4, "PGL").exists == "no"
    assert classify(9, "PGL").exists == "yes"
    assert classify(8, "PSL").exists == "yes"  # PSL = PGL in char 2


def test_classify_psl_1mod4():
    assert classify(5, "PSL").exists == "no"
    assert classify(9, "PSL").exists == "no"
    assert classify(13, "PSL").exists == "yes"
    assert classify(169, "PSL").exists == "yes"


def test_classify_3mod4_prime_power_degree():
    assert classify(27, "PSL").exists == "no"
    assert classify(343, "PSL").exists == "no"  # 7^3
    assert classify(3**9, "PSL").exists == "no"  # d = 9 = 3^2 prime power


def test_classify_unresolved_conjecture_case():
    rep = classify(3**15, "PSL")
    assert rep.exists == "unresolved"
    assert rep.matched_cases == ["conj3"]


def test_rank5_always_nonexistent():
    for q in (8, 13, 31, 169):
        assert classify(q, "PSL").rank5_exists is False


def test_predicted_counts_q8():
    counts, partial = predicted_counts(8, "PGL")
    assert counts == {"[7,7,7]": 2}
    assert partial


def test_predicted_counts_169_affine():
    counts, partial = predicted_counts(169, "PSL")
    assert counts == {"[21,42,21]": 6, "[28,28,28]": 6, "[84,84,84]": 12}
    assert partial


def test_predicted_counts_179():
    counts, partial = predicted_counts(179, "PSL")
    assert counts == {"[5,3,5]": 2}
    assert not partial


def test_classifier_matches_table2_for_3mod4_primes():
    for q, count, q4, _, cases in TABLE2:
        if count is None or q4 != 3:
            continue
        p, d = split_prime_power(q)
        if d > 1:
            continue
        rep = classify(q, "PSL")
        assert rep.total() == count, q
        assert rep.cases_string() == cases, q


def test_classifier_cases_match_table2_everywhere():
    for q, _, _, _, cases in TABLE2:
        rep = classify(q, "PSL")
        assert rep.cases_string().replace("(conj)", "") == cases, q


def test_case_exclusivity_mod_residues():
    # (4a) and (4b) exclude each other via p mod 11; (4c) and (4d) via p mod 19
    from chiral4.fields import is_prime
    for p in range(7, 10000, 4):
        if not is_prime(p):
            continue
        rep = classify(p, "PSL")
        cs = set(rep.matched_cases)
        assert not ({"4a", "4b"} <= cs)
        assert not ({"4c", "4d"} <= cs)


def test_smallest_witnesses_computed():
    # honest minima under the literal conditions; (a),(b),(e) differ from
    # the values printed in the source analysis (see witness_discrepancies)
    assert smallest_witnesses() == {"a": 499, "b": 19, "c": 131, "d": 179, "e": 719}


def test_witness_discrepancies_flagged():
    from chiral4.classifier import REPORTED_WITNESSES, witness_discrepancies
    d = witness_discrepancies()
    assert set(d) == {"a", "b", "e"}
    assert d["a"] == (499, 619) and d["b"] == (19, 139) and d["e"] == (719, 631)
    assert REPORTED_WITNESSES["c"] == smallest_witnesses()["c"] == 131


def test_reported_witness_619_satisfies_no_case():
    # the crux of the discrepancy: 619 has the (a) residue pattern but the
    # square test fails, so no condition at all matches
    rep = classify(619, "PSL")
    assert rep.matched_cases == []
    assert rep.residues["p mod 11"] in (1, 3, 4, 5, 9)
    assert not (rep.residues["3+2sqrt5_square"] and rep.residues["3-2sqrt5_square"])
    # and 631 matches (a) as well as (e)
    assert classify(631, "PSL").matched_cases == ["4a", "4e"]


def test_survey_rows_shape():
    rows = survey_rows(32)
    qs = [r[0] for r in rows]
    assert qs == [4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
    by_q = {r[0]: r for r in rows}
    assert by_q[31][1] == 6
    assert by_q[31][4] == "(d)(e)"
    assert by_q[8][2] is None
