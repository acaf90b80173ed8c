import csv
import io
import json

import pytest

from ellipticw.cli import main, parse_complex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [("0.4+0.1i", 0.4 + 0.1j), ("0.5", 0.5), ("-0.3-2i", -0.3 - 2j), ("2i", 2j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_verify_rmatrix_example(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "rmatrix", "-N", "3", "-q", "0.4+0i", "-p", "0.09+0i", "--seed", "7")
    assert code == 0
    assert out.count("PASS") >= 8 and "FAIL " not in out


def test_verify_critical_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "critical", "-N", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and data["passed"]
    names = [c["name"] for c in data["checks"]]
    assert "T_EQUALS_ONE[N=2]" in names


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "sumrule", "-N", "2", "--tol", "1e-30")
    assert code == 1 and "FAIL" in out


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "f", "-N", "3", "-q", "0.5", "-x", "0.7+0.1i")
    assert code == 0 and "route residual" in out
    code, out, _ = run(capsys, "eval", "Y", "-N", "2", "-M", "1", "-p", "0.25", "-x", "1.1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["route_residual"] < 1e-12
    code, out, _ = run(capsys, "eval", "f", "--at-sum-rule", "-N", "4", "--format", "json")
    assert abs(complex(*json.loads(out)["value"])) < 1e-10


def test_eval_pole_and_usage_errors(capsys):
    code, _, err = run(capsys, "eval", "tau_N", "-N", "2", "-q", "0.5", "-x", str(0.5**0.5))
    assert code == 1 and "near" in err
    code, _, err = run(capsys, "eval", "Y", "-N", "2", "-x", "1.1")
    assert code == 2 and "missing" in err
    assert main(["nonsense"]) == 2
    code, _, _ = run(capsys, "table", "--regime", "CRITICAL", "-N", "3", "-i", "5")
    assert code == 2


def test_table_csv_json_roundtrip(capsys, tmp_path):
    args = ["table", "--regime", "CRITICAL", "-N", "3", "-i", "1", "-j", "2", "--rmax", "8"]
    run(capsys, *args, "--format", "csv", "--out", str(tmp_path / "t.csv"))
    run(capsys, *args, "--format", "json", "--out", str(tmp_path / "t.json"))
    rows = [r for r in (tmp_path / "t.csv").read_text().splitlines() if not r.startswith("#")]
    table = list(csv.DictReader(io.StringIO("\n".join(rows))))
    data = json.loads((tmp_path / "t.json").read_text())
    assert len(table) == len(data["coeffs"]) == 17
    for row, entry in zip(table, data["coeffs"]):
        assert int(row["r"]) == entry["r"]
        assert float(row["re"]) == entry["re"] and float(row["im"]) == entry["im"]


def test_table_quantum_check(capsys):
    code, out, _ = run(capsys, "table", "--regime", "QUANTUM", "-N", "3", "-M", "1", "-p", "0.8", "-q", "0.3",
                       "--sector", "1", "--rmax", "4", "--check", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["oracle_max_residual"] < 1e-9


def test_table_h_odd_third_term(capsys):
    code, out, _ = run(capsys, "table", "--regime", "H_ODD", "-N", "3", "-i", "2", "-j", "2", "--rmax", "3",
                       "--check", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["oracle_max_residual"] < 1e-9


def test_ladder(capsys):
    code, out, _ = run(capsys, "ladder", "-N", "3", "-q", "0.5", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert [round(s["upper_q_exponent"], 9) for s in data["sectors"][:3]] == [1, 2, 3]
    code, out, _ = run(capsys, "ladder", "--regime", "QUANTUM", "-N", "3", "-M", "1", "-p", "0.8", "-q", "0.3")
    assert code == 0 and "orders 2" in out and "orders 1" in out


def test_json_determinism(capsys):
    a = run(capsys, "verify", "--suite", "sumrule", "--seed", "11", "--format", "json")[1]
    b = run(capsys, "verify", "--suite", "sumrule", "--seed", "11", "--format", "json")[1]
    c = run(capsys, "verify", "--suite", "sumrule", "--seed", "12", "--format", "json")[1]
    assert a == b and a != c
