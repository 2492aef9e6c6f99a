import csv
import io
import json
import subprocess
import sys

import pytest

from simulapprox.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_approximate_zero(capsys):
    code, out, err = run(capsys, "approximate", "--fn", "zero", "--n", "1", "--m", "1",
                         "--degrees", "4", "--grid", "11")
    assert code == 0 and err == ""
    table = rows(out)
    assert table[0] == ["degree", "alpha", "sup_error", "max_sigma_bern_error"]
    assert [r[:2] for r in table[1:]] == [["4", "0"], ["4", "1"]]
    assert all(float(r[2]) == 0.0 for r in table[1:])


def test_approximate_json(capsys):
    code, out, _ = run(capsys, "approximate", "--fn", "exp-sum", "--n", "1", "--degrees", "4,8",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and [r["degree"] for r in data["runs"]] == [4, 8]
    assert data["runs"][1]["max_error"] < data["runs"][0]["max_error"]


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify-identity", "--n", "2", "--m", "2")
    assert code == 0 and rows(out) == [["m", "n", "residual"], ["2", "2", "0.0"]]


def test_poincare_single_functions(capsys):
    _, out, _ = run(capsys, "poincare", "--statement", "order-one", "--fn", "x1", "--p", "inf",
                    "--grid", "11")
    assert rows(out)[1] == ["0", "1.0", "1.0", "1.0", "true"]
    _, out, _ = run(capsys, "poincare", "--statement", "detailed", "--fn", "x1x2", "--n", "2",
                    "--chain-start", "1,0", "--chain-steps", "2:0", "--grid", "11")
    assert float(rows(out)[1][3]) == 1.0
    _, out, _ = run(capsys, "poincare", "--statement", "standard", "--fn", "bubble", "--grid", "101")
    assert float(rows(out)[1][3]) == pytest.approx(0.25)


def test_poincare_sweep(capsys):
    code, out, _ = run(capsys, "poincare", "--statement", "order-one", "--cases", "5", "--p", "2",
                       "--seed", "3")
    table = rows(out)
    assert code == 0 and len(table) == 6 and all(r[4] == "true" for r in table[1:])


def test_mollify_demo(capsys, tmp_path):
    target = tmp_path / "table.csv"
    code, out, _ = run(capsys, "mollify-demo", "--steps", "4,8", "--out", str(target))
    assert code == 0 and out == ""
    table = rows(target.read_text())
    assert table[0] == ["n", "error"] and float(table[2][1]) < float(table[1][1])


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "m": 2}))
    _, out, _ = run(capsys, "verify-identity", "--config", str(cfg), "--m", "1")
    assert rows(out)[1][:2] == ["1", "2"]
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(capsys, "verify-identity", "--config", str(cfg))
    assert code == 2 and json.loads(err)["error"] == "usage"


@pytest.mark.parametrize("argv", [
    ["approximate", "--m", "4"],
    ["approximate", "--n", "4"],
    ["approximate", "--degrees", "8,99"],
    ["approximate", "--fn", "nope"],
    ["poincare", "--p", "3"],
    ["poincare", "--statement", "detailed", "--fn", "x1x2", "--n", "2"],
    ["poincare", "--statement", "order-one", "--fn", "one"],
    ["mollify-demo", "--target-order", "5", "--smoothness", "1"],
    ["frobnicate"],
])
def test_usage_errors_single_line(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.count("\n") == 1
    diag = json.loads(err)
    assert set(diag) == {"error", "message"}


def test_deterministic_output(capsys):
    argv = ["poincare", "--statement", "detailed", "--n", "2", "--m", "2", "--cases", "4", "--grid", "21"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simulapprox", "verify-identity"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "1,1,0.0"
