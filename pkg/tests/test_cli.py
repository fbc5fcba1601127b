import csv
import io
import json

import pytest

from singlet_ghz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ghz_json(capsys):
    code, out, _ = run(capsys, "ghz", "--trials", "5000", "--seed", "42", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdicts"]["ghz_deterministic"] is True
    assert doc["config"]["seed"] == 42


def test_detector_csv(capsys):
    code, out, _ = run(capsys, "detector", "--eta", "0.5", "--trials", "200000", "--seed", "7",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "value", "std_error", "count"]
    table = {r[0]: r for r in rows[1:]}
    assert all(len(r) == 4 for r in rows)
    st = float(table["st_value"][1])
    se = float(table["st_value"][2])
    assert abs(st + 2.0161e-3) <= 3 * se + 1e-7


@pytest.mark.parametrize("argv", [
    ["detector", "--eta", "1.5"],
    ["detector", "--eta", "0"],
    ["detector", "--trials", "0"],
    ["detector", "--seed", "-3"],
    ["ideal", "--eta", "0.5"],
    ["frobnicate"],
    ["ghz", "--bogus"],
    ["hv", "--model", "nope"],
    ["ghz", "--threads", "0"],
])
def test_config_errors_exit_2(capsys, argv, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, err = run(capsys, *argv, "--out", str(out_file))
    assert code == 2
    assert err
    assert out == ""
    assert not out_file.exists()
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize("sub", ["ghz", "ideal", "detector", "hv", "enumerate", "chsh"])
def test_every_subcommand_runs(capsys, sub):
    code, out, _ = run(capsys, sub, "--trials", "1000", "--eta", "1.0")
    assert code == 0
    json.loads(out)


def test_out_file_and_byte_identity(capsys, tmp_path):
    paths = []
    for threads in ("1", "4"):
        p = tmp_path / f"r{threads}.csv"
        assert main(["chsh", "--trials", "3000", "--eta", "0.8", "--seed", "5",
                     "--format", "csv", "--threads", threads, "--out", str(p)]) == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert capsys.readouterr().out == ""
