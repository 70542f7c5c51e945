import json

import pytest

from chiral4.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify_text(capsys):
    code, out = run_cli(capsys, "classify", "--field", "31")
    assert code == 0
    assert "yes" in out and "(d)(e)" in out


def test_classify_json(capsys):
    code, out = run_cli(capsys, "classify", "--field", "3^15", "--group", "psl",
                        "--format", "json")
    assert code == 0
    blob = json.loads(out)
    assert blob["exists"] == "unresolved"
    assert blob["cases"] == ["conj3"]


def test_classify_survey(capsys):
    code, out = run_cli(capsys, "classify", "--field", "5", "--survey", "20")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("q,")
    assert "19,4,3,19,(b)" in lines


def test_enumerate_json_round_trip(tmp_path, capsys):
    code, out = run_cli(capsys, "enumerate", "--field", "2^3", "--group", "pgl",
                        "--format", "json")
    assert code == 0
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert len(records) == 2
    blob = records[0]
    f = tmp_path / "triple.json"
    f.write_text(json.dumps(blob))
    code, out = run_cli(capsys, "verify", "--triple", str(f))
    assert code == 0
    assert out.startswith("CHIRAL, type [7,7,7], group PSL(2,8)")


def test_verify_rejects_regular(tmp_path, capsys):
    # k = 5 at q = 16 satisfies C1-C3 but is directly regular
    from chiral4.constructions import pgl_triple
    from chiral4.fields import make_field
    t = pgl_triple(make_field(2, 4), 3)
    blob = {"field": make_field(2, 4).name(), "group": "PGL",
            "s1": t.s1.to_json(), "s2": t.s2.to_json(), "s3": t.s3.to_json()}
    f = tmp_path / "t.json"
    f.write_text(json.dumps(blob))
    code, out = run_cli(capsys, "verify", "--triple", str(f))
    assert code == 0
    assert out.startswith("NOT CHIRAL") and "chiral" in out


def test_construct_families(capsys):
    code, out = run_cli(capsys, "construct", "--field", "31", "--family", "534")
    assert code == 0
    lines = [ln for ln in out.strip().splitlines() if ln.startswith("[5,3,4]")]
    assert len(lines) == 2
    code, out = run_cli(capsys, "construct", "--field", "13", "--family", "psl",
                        "--format", "json")
    assert code == 0
    assert len(out.strip().splitlines()) == 2


def test_tables_reproduce_2(capsys):
    code, out = run_cli(capsys, "tables", "--reproduce", "2", "--max-q", "17")
    assert code == 0
    assert "13,6,1,13,(3)" in out
    assert "MISMATCH" not in out


def test_tables_mismatch_exit_2(capsys, monkeypatch):
    import chiral4.tables as tables
    doctored = [(5, 1, 1, 5, "")]  # wrong count for q=5
    monkeypatch.setattr(tables, "TABLE2", doctored)
    code, out = run_cli(capsys, "tables", "--reproduce", "2", "--max-q", "5")
    assert code == 2
    assert "MISMATCH" in out


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--group", "psl"])  # missing --field
    assert exc.value.code == 1


def test_conjecture_cli(capsys):
    code, out = run_cli(capsys, "conjecture", "--p", "3", "--e1", "3", "--e2", "5",
                        "--budget", "30", "--seed", "2", "--c3-budget", "500")
    assert code == 0
    blob = json.loads(out)
    assert blob["seed"] == 2
    assert blob["witness_found"] is True
    assert blob["verification"]["relations"] is True
    assert blob["verification"]["c3_mode"] == "UNVERIFIED-SAMPLED"


def test_rank5_cli(capsys):
    code, out = run_cli(capsys, "enumerate", "--field", "5", "--rank", "5",
                        "--group", "pgl")
    assert code == 0
    assert "0" in out
