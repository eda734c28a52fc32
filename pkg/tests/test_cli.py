import csv
import json
import subprocess
import sys

import pytest

from shotnoise.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, parse_grid, run, UsageError


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_grid():
    g = parse_grid("-1:1:5")
    assert list(g) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    for bad in ("1:2", "a:b:3", "0:1:0"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_density_writes_csv_and_manifest(tmp_path):
    out = tmp_path / "d.csv"
    assert run(["density", "--grid=-2:2:21", "--out", str(out)]) == EXIT_OK
    r = rows(out)
    assert r[0] == ["x", "f", "method", "err"] and len(r) == 22
    assert r[11][1] == "inf"
    man = json.loads((tmp_path / "d.csv.manifest.json").read_text())
    assert man["subcommand"] == "density" and man["outputs"] == [str(out)]
    assert set(man["versions"]) >= {"shotnoise", "numpy", "scipy", "mpmath"}
    assert man["config"]["grid"] == "-2:2:21"


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["mc", "--seed", "4", "--samples", "5000", "--range=-2:2:20"]
    assert run(args + ["--out", str(a)]) == EXIT_OK
    assert run(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_text() == b.read_text()
    assert json.loads((tmp_path / "a.csv.manifest.json").read_text())["seed"] == 4


@pytest.mark.parametrize("args", [
    ["specfun-table", "--fn", "cji", "--order", "2", "--grid", "0.5:10:5"],
    ["specfun-table", "--fn", "pfq", "--grid", "0:3:4"],
    ["tail", "--grid", "4:8:3"],
    ["closed-form", "--name", "f0_three_uniforms", "--grid=-1:1:5"],
    ["closed-form", "--law", "g1", "--grid", "0.5:3:4"],
])
def test_subcommands_succeed(args, capsys):
    assert run(args) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert len(out) >= 2 and "," in out[0]


def test_tail_columns(capsys):
    run(["tail", "--grid", "5:5:1"])
    assert capsys.readouterr().out.splitlines()[0] == "x,s0,phi,phi2,f"


def test_triggered_sidecar(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["triggered", "--grid=-1:1:3", "--out", str(out)]) == EXIT_OK
    model = json.loads((tmp_path / "t.csv.model.json").read_text())
    assert model["c"][2] == "-3/32"
    assert len(rows(out)) == 4


def test_compare_exit_codes(tmp_path, capsys):
    base = ["compare", "--seed", "1", "--samples", "20000"]
    assert run(base + ["--out", str(tmp_path / "c.csv")]) == EXIT_OK
    man = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert man["results"]["passed"] and man["results"]["ks"] < 0.01
    assert run(base + ["--threshold", "1e-4"]) == EXIT_VALIDATION


@pytest.mark.parametrize("args", [
    [],
    ["bogus"],
    ["density", "--grid", "1:2"],
    ["density", "--law", "nope"],
    ["density", "--x1", "50"],
    ["mc", "--samples", "10"],
    ["mc", "--seed", "1", "--samples", "10"],
    ["closed-form", "--name", "nope"],
    ["acceptance", "--criterion", "12"],
])
def test_usage_and_config_errors(args, capsys):
    assert run(args) == EXIT_USAGE


def test_acceptance_subcommand(capsys):
    assert run(["acceptance", "--criterion", "7"]) == EXIT_OK
    assert "criterion  7 PASS" in capsys.readouterr().err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "shotnoise", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip()
