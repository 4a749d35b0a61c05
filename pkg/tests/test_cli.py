import csv
import io
import json

import pytest

from sln_verlinde.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, main, parse_k_range, UsageError
from sln_verlinde.exact import parse_rational
from sln_verlinde.verlinde import LevelPolynomial


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sum_range(capsys):
    code, out, _ = run(capsys, "sum", "--n", "2", "--g", "2", "--k", "2..5")
    assert code == EXIT_OK
    assert [v["value"] for v in json.loads(out)["values"]] == ["1", "4", "10", "20"]


@pytest.mark.parametrize("argv,expected", [
    (["--n", "3", "--g", "2", "--k", "6"], "166"),
    (["--n", "2", "--g", "1", "--k", "7"], "6"),
])
def test_sum_single(capsys, argv, expected):
    code, out, _ = run(capsys, "sum", *argv, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == EXIT_OK and rows[0] == ["k", "value"] and rows[1][1] == expected


def test_poly_coefficients(capsys):
    code, out, _ = run(capsys, "poly", "--n", "2", "--g", "2")
    data = json.loads(out)
    assert code == EXIT_OK
    assert [c["value"] for c in data["coefficients"]] == ["0", "-1/6", "0", "1/6"]


@pytest.mark.parametrize("n,k,expected", [(2, "4", "10"), (3, "6", "166")])
def test_poly_eval(capsys, n, k, expected):
    code, out, _ = run(capsys, "poly", "--n", str(n), "--g", "2", "--eval", k)
    assert json.loads(out)["evaluations"] == [{"k": int(k), "value": expected}]


def test_json_round_trip_reproduces_sums(capsys):
    _, out, _ = run(capsys, "poly", "--n", "3", "--g", "2")
    P = LevelPolynomial.from_json(json.loads(out))
    _, out, _ = run(capsys, "sum", "--n", "3", "--g", "2", "--k", "3..9")
    for row in json.loads(out)["values"]:
        assert P(row["k"]) == parse_rational(row["value"])


def test_matrix_csv(capsys):
    code, out, _ = run(capsys, "matrix", "--k", "6", "--g", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == EXIT_OK
    assert rows[0] == [f"c{j}" for j in range(6)]
    assert rows[1] == ["166", "-45", "-29", "-18", "-29", "-45"]
    assert len(rows) == 7


def test_matrix_guard_failure(capsys):
    code, _, err = run(capsys, "matrix", "--k", "5", "--g", "2")
    assert code == EXIT_GUARD and "guard" in err


def test_mzv(capsys):
    code, out, _ = run(capsys, "mzv", "--g", "1")
    assert code == EXIT_OK
    assert json.loads(out) == {"coefficient": "1/2835", "pi_power": 6}


def test_fusion(capsys):
    code, out, _ = run(capsys, "fusion", "--n", "2", "--level", "1", "--g", "2")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["weights"] == ["0", "1"]
    assert data["tensor"][1][1] == ["1", "0"]
    assert data["correlator"]["value"] == "4"


def test_rr_check(capsys):
    code, out, _ = run(capsys, "rr-check", "--n", "2", "--g", "2")
    data = json.loads(out)
    assert code == EXIT_OK and data["ok"] is True


def test_rr_check_truncation_too_small(capsys):
    code, _, _ = run(capsys, "rr-check", "--n", "3", "--g", "2", "--truncation", "1,1")
    assert code == EXIT_GUARD


def test_usage_errors(capsys):
    assert run(capsys, "poly", "--n", "2", "--g", "1")[0] == EXIT_USAGE
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys, "sum", "--n", "2", "--g", "2")[0] == EXIT_USAGE
    assert run(capsys, "sum", "--n", "2", "--g", "2", "--k", "5..3")[0] == EXIT_USAGE
    assert run(capsys, "sum", "--n", "2", "--g", "2", "--k", "3", "--format", "xml")[0] == EXIT_USAGE


def test_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("VERLINDE_PRECISION_BITS", "32")
    assert run(capsys, "sum", "--n", "2", "--g", "2", "--k", "3")[0] == EXIT_USAGE
    monkeypatch.setenv("VERLINDE_PRECISION_BITS", "64")
    assert run(capsys, "sum", "--n", "3", "--g", "4", "--k", "30")[0] == EXIT_GUARD
    assert run(capsys, "sum", "--n", "3", "--g", "4", "--k", "30", "--precision-bits", "256")[0] == EXIT_OK


def test_output_file(capsys, tmp_path):
    target = tmp_path / "v.txt"
    code, out, _ = run(capsys, "sum", "--n", "2", "--g", "2", "--k", "4", "--format", "text", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().strip() == "V_4(SL2, g=2) = 10"


def test_deterministic_output(capsys):
    first = run(capsys, "fusion", "--n", "3", "--level", "2")[1]
    assert run(capsys, "fusion", "--n", "3", "--level", "2")[1] == first


def test_k_ranges():
    assert parse_k_range("2..4") == [2, 3, 4]
    assert parse_k_range("7") == [7]
    with pytest.raises(UsageError):
        parse_k_range("a..b")
