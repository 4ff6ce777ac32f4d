import json

import pytest

from maxclass import io
from maxclass.cli import main, table_rows


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_prints_summary_and_spec(capsys):
    code, out, _ = run(capsys, "construct", "--p", "5", "--m", "4", "--n", "6")
    assert code == 0
    assert "degree of commutativity: 1" in out
    spec = json.loads(out[out.index("{"):])
    assert spec["schema"] == io.GROUPSPEC_SCHEMA and spec["alpha"]["kind"] == "canonical"


def test_construct_writes_files(capsys, tmp_path):
    spec, table = tmp_path / "g.json", tmp_path / "t.json"
    code, out, _ = run(capsys, "construct", "--p", "5", "--m", "4", "--n", "4", "--out", str(spec),
                       "--table-out", str(table), "--oracle-cap", "625")
    assert code == 0 and "{" not in out
    assert json.loads(table.read_text())["order"] == 625
    A, _ = io.load_groupspec(str(spec))
    assert (A.p, A.m, A.n) == (5, 4, 4)


@pytest.mark.parametrize("argv", [
    ["construct", "--p", "3", "--m", "4", "--n", "5"],
    ["construct", "--p", "5", "--m", "4", "--n", "9"],
    ["construct", "--p", "9", "--m", "4", "--n", "5"],
    ["table", "--p", "5", "--m-range", "8..4"],
])
def test_bad_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error")


def test_p3_needs_alpha_file(capsys):
    _, _, err = run(capsys, "construct", "--p", "3", "--m", "4", "--n", "5")
    assert "alpha-solve" in err


def test_alpha_solve_then_b0(capsys, tmp_path):
    sols = tmp_path / "s.json"
    code, _, _ = run(capsys, "alpha-solve", "--p", "3", "--m", "4", "--n", "5", "--out", str(sols))
    assert code == 0
    data = json.loads(sols.read_text())
    assert any(s["surjective"] for s in data["solutions"])
    code, out, _ = run(capsys, "b0", "--p", "3", "--m", "4", "--n", "5", "--alpha-file", str(sols))
    assert code == 0
    assert io.load_report(out)["records"][0]["invariants"] == [3]
    code, _, err = run(capsys, "b0", "--p", "3", "--m", "4", "--n", "5", "--alpha-file", str(sols),
                       "--solution", "99")
    assert code == 2


def test_b0_all_reports_agreement(capsys):
    code, out, _ = run(capsys, "b0", "--p", "5", "--m", "4", "--n", "5", "--method", "all")
    assert code == 0
    rep = io.load_report(out)
    assert rep["agreement"] == {"formula~coinvariants": True}
    assert "TooLarge" in rep["skipped"]["oracle"]
    assert {r["method"] for r in rep["records"]} == {"formula", "coinvariants"}


def test_b0_all_disagreement_exits_1(capsys):
    code, out, _ = run(capsys, "b0", "--p", "5", "--m", "6", "--n", "10", "--method", "all")
    assert code == 1
    assert io.load_report(out)["agreement"]["formula~coinvariants"] is False


def test_b0_oracle_from_table_file(capsys, tmp_path):
    from maxclass.tables import classical_2group
    path = tmp_path / "t.json"
    path.write_text(json.dumps(classical_2group("dihedral", 4).to_json()))
    code, out, _ = run(capsys, "b0", "--table-file", str(path), "--method", "oracle")
    assert code == 0
    assert io.load_report(out)["records"][0]["invariants"] == []


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--p", "5", "--m-range", "4..6")
    assert code == 0
    rows = io.table_rows_from_csv(out)
    assert [(r["m"], r["n"]) for r in rows] == [(m, n) for m in range(4, 7) for n in range(m + 1, 2 * m - 1)]
    assert rows == table_rows(5, 4, 6)
    assert [(r["m"], r["n"]) for r in rows if not r["agree"]] == [(6, 10)]


def test_present_check(capsys):
    code, out, err = run(capsys, "present", "--p", "7", "--m", "4", "--n", "5", "--check")
    assert code == 0 and out.strip()
    assert "relators evaluate to the identity" in err


def test_verify_fixtures_and_fault(capsys):
    code, out, _ = run(capsys, "verify", "--fixtures")
    assert code == 0 and "[FAIL]" not in out
    code, out, _ = run(capsys, "verify", "--fixtures", "--inject-fault", "wrong-carry")
    assert code == 1 and "[FAIL]" in out
    code, _, _ = run(capsys, "verify", "--p", "5", "--m", "5", "--n", "7")
    assert code == 0


def test_verify_requires_full_case(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--p", "5"])
