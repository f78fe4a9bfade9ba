import csv
import io
import json

import pytest

from rangesum.cli import run
from rangesum.report import flatten


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pair_identity(capsys):
    code, out, _ = call(capsys, "pair-identity", "--prime", "13", "--threads", "1")
    assert code == 0
    chk = json.loads(out)["checks"][0]
    assert chk["distinct_values"] == [-1] and chk["pairs"] == 13 * 12


def test_verify(capsys):
    code, out, _ = call(capsys, "verify", "--prime", "7", "--poly", "1,0,0,1")
    assert code == 0
    rep = json.loads(out)
    residual = next(c for c in rep["checks"] if c["name"] == "poly.residual")
    assert (residual["count_c"], residual["count_c_minus_p"]) == (6, 1)
    assert rep["schema"] == 1


def test_verify_outside_hypotheses_is_a_finding(capsys):
    code, out, _ = call(capsys, "verify", "--prime", "7", "--poly", "0,0,0,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["findings"][0]["error"] == "WrongRangeSum"


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--prime", "4"],
        ["classify", "--prime", "2"],
        ["classify", "--prime", "29"],
        ["tables"],
        ["verify", "--prime", "7", "--poly", "1,9"],
        ["bogus", "--prime", "7"],
        ["bounds", "--prime", "23", "--exhaustive"],
        ["classify", "--prime", "7", "--resume"],
        ["tables", "--prime", "7", "--threads", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_bounds_deterministic(capsys):
    argv = ["bounds", "--prime", "11", "--trials", "3000", "--seed", "4"]
    reports = []
    for threads in ("1", "3"):
        code, out, _ = call(capsys, *argv, "--threads", threads)
        assert code == 0
        d = json.loads(out)
        del d["timestamp"], d["runtime"]
        reports.append(json.dumps(d, sort_keys=True))
    assert reports[0] == reports[1]
    code, out, _ = call(capsys, *argv[:-1], "5", "--threads", "1")
    d = json.loads(out)
    assert d["config"]["seed"] == 5


def test_exhaustive_bounds(capsys):
    code, out, _ = call(capsys, "bounds", "--prime", "7", "--exhaustive", "--threads", "1")
    assert code == 0
    chk = json.loads(out)["checks"][0]
    assert chk["mode"] == "exhaustive" and chk["count"] == 128 and chk["violations"] == 0


def test_csv_matches_json(capsys):
    base = ["families", "--prime", "11", "--threads", "1"]
    _, js, _ = call(capsys, *base)
    _, cs, _ = call(capsys, *base, "--format", "csv")
    rep = json.loads(js)
    expected = set()
    for section, key in (("check", "checks"), ("finding", "findings")):
        for item in rep[key]:
            item = dict(item)
            name = item.pop("name")
            expected |= {(section, name, k, str(v)) for k, v in flatten(item)}
    rows = list(csv.reader(io.StringIO(cs)))
    assert rows[0] == ["section", "name", "field", "value"]
    assert {tuple(r) for r in rows[1:]} == expected


def test_tables_records_orientation(capsys):
    code, out, _ = call(capsys, "tables", "--prime", "7")
    assert code == 0
    finding = json.loads(out)["findings"][0]
    assert finding["name"] == "table1_orientation"
    assert finding["transposed_matches"] == finding["pairs"] == 42


def test_classify_and_output_file(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = call(capsys, "classify", "--prime", "11", "--threads", "1", "--output", str(out_file))
    assert code == 0 and out == ""
    rep = json.loads(out_file.read_text())
    result = next(c for c in rep["checks"] if c["name"] == "classify.result")
    assert result["orbit_count"] == 2 and result["raw_solution_count"] == 44


def test_classify_interrupt_and_resume(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    base = ["classify", "--prime", "11", "--threads", "1", "--checkpoint", str(ck)]
    code, _, err = call(capsys, *base, "--stop-after-units", "3")
    assert code == 1 and "resume" in err
    code, resumed, _ = call(capsys, *base, "--resume")
    code2, fresh, _ = call(capsys, "classify", "--prime", "11", "--threads", "1")
    assert code == code2 == 0
    strip = lambda s: [c for c in json.loads(s)["checks"]]
    assert strip(resumed) == strip(fresh)


def test_min_degree(capsys):
    code, out, _ = call(capsys, "min-degree", "--prime", "7", "--threads", "1")
    chk = json.loads(out)["checks"][0]
    assert code == 0 and chk["min_nonconstant_degree"] == 3 and chk["census"][0] == [0, 1]


def test_directions_from_file_and_poly(capsys, tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("\n".join(f"{x},{x ** 3 % 5}" for x in range(5)) + "\n")
    code, out, _ = call(capsys, "directions", "--prime", "5", "--set", str(f))
    chk = json.loads(out)["checks"][0]
    assert code == 0 and chk["directions"] == [1, 2, 3, 4] and chk["verdict"] == "AtLeastBound"
    code, out, _ = call(capsys, "directions", "--prime", "7", "--poly", "0,3", "--trials", "50", "--threads", "1")
    rep = json.loads(out)
    assert code == 0 and rep["checks"][0]["verdict"] == "Line"
    assert rep["checks"][1]["verdicts"]["Violation"] == 0


def test_exit_one_on_failed_claim(capsys, monkeypatch):
    from rangesum import charsum

    monkeypatch.setattr(charsum, "table1_prediction", lambda p, s: {k: 0 for k in charsum.SIGN_PAIRS})
    code, _, _ = call(capsys, "tables", "--prime", "7")
    assert code == 1
