import json
import math
import subprocess
import sys

import pytest

from edgecontract import cli
from edgecontract.instance_file import save_instance
from edgecontract.oracle import brute_force_opt
from edgecontract.reports import parse_csv, strip_wall_clock

from conftest import complete


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k3_path(tmp_path, k3):
    path = tmp_path / "k3.json"
    save_instance(k3, path)
    return str(path)


def test_eval_empty_set(capsys, k3_path):
    code, out, _ = run(capsys, "eval", "--instance", k3_path)
    assert code == 0 and json.loads(out)["g"] == 0.0


def test_eval_full_set(capsys, k3_path):
    code, out, _ = run(capsys, "eval", "--instance", k3_path, "--set", "0,1,2")
    data = json.loads(out)
    assert data["g"] == pytest.approx(0.55) and data["contract"] == pytest.approx([0.15] * 3)


def test_oracle_edgeless(capsys):
    code, out, _ = run(capsys, "oracle", "--gen", "gnp n=8 p=0 cost=identical(0.01)")
    assert code == 0 and json.loads(out)["best_set"] == [] and json.loads(out)["opt"] == 0.0


def test_compare_k3(capsys, k3_path):
    code, out, _ = run(capsys, "compare", "--instance", k3_path, "--epsilon", "0.04")
    data = json.loads(out)
    assert data["bound"] == pytest.approx(1.0)
    assert data["gap"] <= data["bound"] and data["within_bound"]


def test_compare_gap_is_exact_difference(capsys):
    code, out, _ = run(capsys, "compare", "--gen", "gnp n=16 p=0.6 cost=uniform(0.003) seed=4", "--trials", "2")
    data = json.loads(out)
    assert code == 0 and not data["exact"]
    assert abs(data["gap"] - (data["opt"] - data["best_g"])) <= 1e-12


def test_ptas_is_byte_deterministic(capsys, tmp_path):
    args = ["ptas", "--gen", "gnp n=16 p=0.5 cost=uniform(0.002) seed=1", "--seed", "5", "--trials", "2"]
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        assert cli.main(args + ["--out", str(path)]) == 0
        outs.append(json.loads(path.read_text()))
    assert strip_wall_clock(outs[0]) == strip_wall_clock(outs[1])


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("PTAS_SEED", "12")
    args = ["ptas", "--gen", "gnp n=16 p=0.5 cost=uniform(0.002) seed=1", "--e-guess-range", "3..4", "--trials", "1"]
    _, out, _ = run(capsys, *args)
    seeds = {tuple(t["seed"]) for r in json.loads(out)["records"] for t in r.get("trials", [])}
    assert all(s[0] == 12 for s in seeds) and seeds


def test_csv_format(capsys):
    code, out, _ = run(capsys, "ptas", "--gen", "gnp n=16 p=0.5 seed=2", "--e-guess-range", "0..5",
                       "--format", "csv", "--trials", "1")
    rows = parse_csv(out)
    assert code == 0 and [r["E_guess"] for r in rows] == list(range(6))


@pytest.mark.parametrize(
    "argv",
    [
        ["ptas"],
        ["ptas", "--gen", "gnp n=16", "--e-guess-range", "5..1"],
        ["ptas", "--gen", "gnp n=16", "--e-guess-range", "0..9999"],
        ["ptas", "--gen", "gnp n=16", "--seed", "-1"],
        ["eval", "--gen", "gnp n=4", "--set", "0,9"],
        ["oracle", "--gen", "tree n=4"],
        ["oracle", "--instance", "/nonexistent/file.json"],
        ["oracle", "--gen", "gnp n=5", "--epsilon", "0.9"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_file_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "eval", "--instance", str(path))
    assert code == 2 and "line 1" in err


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--gen", "gnp n=16 p=0.6 cost=uniform(0.002) seed=3")
    assert code == 0 and json.loads(out)["hard_failures"] == []


def test_verify_assertion_exit_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_instance", lambda inst, **kw: {"hard_failures": ["lp_relax:bounds"]})
    code, _, err = run(capsys, "verify", "--gen", "gnp n=16 seed=3")
    assert code == 3 and "lp_relax:bounds" in err


def test_module_entry_point(k3_path):
    proc = subprocess.run([sys.executable, "-m", "edgecontract", "oracle", "--instance", k3_path],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["best_set"] == [0, 1, 2]
