import csv
import json

import pytest

from branched_decay.cli import (EXIT_CONFIG, EXIT_NONCONVERGENCE, EXIT_OK, RunConfig, main,
                                parse_grid, parse_poly, run)


def test_enumerate_prints_nine_trees(capsys):
    assert main(["enumerate", "--n", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.split()
    assert len(lines) == 9 and "[*.*.*.*]" in lines


def test_enumerate_json(tmp_path):
    out = tmp_path / "trees.json"
    assert main(["enumerate", "--n", "3", "--alphabet", "2", "-o", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["schema"] == 1 and data["count"] == 14


def test_coproduct(capsys):
    assert main(["coproduct", "[*.*]"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "2 * * (x) [*]" in out


def test_coproduct_bad_notation():
    assert main(["coproduct", "[*"]) == EXIT_CONFIG


def test_lift_polynomial(tmp_path):
    out = tmp_path / "lift.json"
    code = main(["lift", "--path", "poly", "--poly", "0,1;0,0,1", "--M", "2", "--grid", "0,1",
                 "-o", str(out)])
    assert code == EXIT_OK
    rows = {r["forest"]: r["value"] for r in json.loads(out.read_text())["rows"]}
    assert rows["[*0]1"] == "2/3"


def test_lift_csv(tmp_path):
    src = tmp_path / "x.csv"
    n = 2 ** 10
    src.write_text("t,x\n" + "".join(f"{i / n},{(i / n) ** 2}\n" for i in range(n + 1)))
    out = tmp_path / "lift.json"
    code = main(["lift", "--path", "csv", "--csv", str(src), "--gamma", "0.9", "--M", "2",
                 "--grid", "0,1", "--tol", "1e-6", "-o", str(out)])
    assert code == EXIT_OK
    rows = {r["forest"]: float(r["value"]) for r in json.loads(out.read_text())["rows"]}
    assert rows["[*]"] == pytest.approx(0.5, abs=1e-6)


def test_extend_and_nonconvergence(capsys):
    assert main(["extend", "--N", "1", "--M", "3", "--s", "0", "--t", "1/2"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == 1 and data["M"] == 3
    assert main(["extend", "--M", "4", "--tol", "1e-14", "--max-level", "3"]) == \
        EXIT_NONCONVERGENCE


def test_verify_decay(tmp_path):
    assert main(["verify-decay", "--M", "4", "-o", str(tmp_path)]) == EXIT_OK
    data = json.loads((tmp_path / "decay-identity.json").read_text())
    assert data["reports"][0]["violations"] == 0
    assert (tmp_path / "summary.txt").exists()


def test_counterexample_csv(tmp_path, capsys):
    assert main(["counterexample", "--gamma", "0.5", "--beta", "2", "--a", "0.5", "--b", "1",
                 "--n-max", "200"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["n", "exact_sum", "lower_bound"] and len(rows) == 201
    sums = [float(r[1]) for r in rows[1:]]
    assert max(sums) > 1e3
    assert main(["counterexample", "--n-max", "100", "-o", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "counterexample.csv").exists()


@pytest.mark.parametrize("argv", [
    ["lift", "--gamma", "2"],
    ["extend", "--N", "3", "--M", "2"],
    ["lift", "--tol", "0"],
    ["lift", "--path", "poly"],
    ["lift", "--path", "csv", "--csv", "/no/such/file.csv"],
    ["lift", "--grid", "1,0"],
    ["counterexample", "--gamma", "1"],
    ["enumerate"],
    ["frobnicate"],
    ["extend", "--s", "abc"],
])
def test_config_errors_exit_four(argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_CONFIG


def test_deterministic_reports(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["verify-decay", "--M", "3", "--path", "poly", "--poly", "0,1;0,0,1",
                     "-o", str(d)]) == EXIT_OK

    def strip(p):
        data = json.loads(p.read_text())
        data.pop("timestamp")
        return json.dumps(data, sort_keys=True)

    for f in a.glob("*.json"):
        assert strip(f) == strip(b / f.name)


def test_parsers():
    assert len(parse_grid("dyadic:3")) == 9
    assert parse_poly("0,1;0,0,1/2")[1][2] == 0.5
    with pytest.raises(ValueError):
        parse_grid("dyadic:40")
    with pytest.raises(ValueError):
        parse_poly("0,x")


def test_run_validates_config():
    assert run(RunConfig(command="lift", gamma=0.0)) == EXIT_CONFIG
