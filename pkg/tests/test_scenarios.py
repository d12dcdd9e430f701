import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from rimech import scenarios as sc
from rimech.cli import main
from rimech.errors import ScenarioParseError, ScenarioSchemaError

ROOT = Path(__file__).resolve().parents[1]
MINIMAL_EL = {"name": "mini", "kind": "el-flow",
              "parameters": {"grid": {"start": 0, "stop": 1, "n": 21}, "x0": [0, 1, 0, 0], "v0": [1, 0.1, 0, 0]}}


def _write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_minimal_el_flow_is_valid(tmp_path):
    cfg = sc.load_scenario(_write(tmp_path, MINIMAL_EL))
    assert cfg.kind == "el-flow" and cfg.pipeline == "geodesic"


def test_missing_grid_named(tmp_path):
    doc = json.loads(json.dumps(MINIMAL_EL))
    del doc["parameters"]["grid"]
    with pytest.raises(ScenarioSchemaError) as err:
        sc.load_scenario(_write(tmp_path, doc))
    assert any("grid" in v for v in err.value.violations)


def test_every_violation_reported(tmp_path):
    doc = {"name": 3, "kind": "el-flow", "bogus": 1,
           "parameters": {"x0": [0], "tol": -1.0}}
    with pytest.raises(ScenarioSchemaError) as err:
        sc.load_scenario(_write(tmp_path, doc))
    text = " ".join(err.value.violations)
    for needle in ("bogus", "name", "grid", "v0", "tol"):
        assert needle in text


def test_parse_error_location(tmp_path):
    with pytest.raises(ScenarioParseError) as err:
        sc.load_scenario(_write(tmp_path, '{"name": "x",\n  "kind": }'))
    assert err.value.line == 2 and err.value.column is not None


def test_registry_prefill(tmp_path):
    cfg = sc.load_scenario(_write(tmp_path, {"registry": "appendix-weak-gravity"}))
    assert cfg.kind == "quantize" and cfg.pipeline == "weak-gravity"
    for key in ("u0", "omega", "grid"):
        assert key in cfg.parameters


def test_bracket_table_csv(tmp_path):
    res = sc.run_scenario(sc.registry_config("bracket-table"), tmp_path)
    rows = _rows(tmp_path / "bracket-table" / "brackets.csv")
    mat = np.zeros((4, 4))
    for r in rows:
        mat[int(r["mu"]), int(r["nu"])] = float(r["bracket"])
    assert np.array_equal(mat, np.diag([-1.0, 1, 1, 1]))
    assert res.passed


def test_plane_wave_norm_column(tmp_path):
    sc.run_scenario(sc.registry_config("plane-wave-norm"), tmp_path)
    rows = _rows(tmp_path / "plane-wave-norm" / "norms.csv")
    errs = [abs(float(r["norm"]) - 2.0) for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_factor_of_two_files(tmp_path):
    sc.run_scenario(sc.registry_config("factor-of-two"), tmp_path)
    out = tmp_path / "factor-of-two"
    h = _rows(out / "h_flow.csv")
    ht = _rows(out / "h_tilde_flow.csv")
    assert len(h) == len(ht) > 2
    assert all(float(r["velocity_ratio"]) == pytest.approx(2.0, abs=1e-9) for r in h)


def test_csv_format(tmp_path):
    sc.run_scenario(sc.config_from_dict(MINIMAL_EL), tmp_path)
    raw = (tmp_path / "mini" / "trajectory.csv").read_bytes()
    assert b"\r" not in raw
    assert raw.split(b"\n")[0].startswith(b"lam,")
    assert sc.format_float(0.1) == "0.10000000000000001"


def test_deterministic_csv(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = sc.registry_config("bracket-table")
    sc.run_scenario(cfg, a)
    sc.run_scenario(cfg, b)
    for f in (a / "bracket-table").glob("*.csv"):
        assert f.read_bytes() == (b / "bracket-table" / f.name).read_bytes()


def test_report_all_pass():
    good = sc.RunResult("s", "ext-flow", {}, [sc.Check("c", True, 0.0, "< 1")])
    rep = sc.invariant_report([good])
    assert rep.passed and rep.exit_code == 0


def test_report_names_failing_criterion():
    bad = sc.RunResult("drift", "ext-flow", {}, [sc.Check("constraint", False, 1e-3, "< 1e-7", 3)])
    rep = sc.invariant_report([bad])
    assert rep.exit_code == 1
    assert rep.failing()[0]["criterion"] == 3
    assert "FAIL drift: constraint (criterion 3)" in rep.lines()[0]


def test_report_empty():
    rep = sc.invariant_report([])
    assert rep.rows == [] and rep.exit_code == 0


def test_cli_run_and_report(tmp_path, capsys):
    cfg = _write(tmp_path, MINIMAL_EL)
    out = tmp_path / "out"
    assert main(["--out", str(out), "run", str(cfg)]) == 0
    assert (out / "mini" / "summary.json").exists()
    assert main(["report", str(out)]) == 0
    assert "PASS mini" in capsys.readouterr().out


def test_cli_config_error(tmp_path):
    cfg = _write(tmp_path, {"name": "x", "kind": "el-flow"})
    assert main(["--out", str(tmp_path), "run", str(cfg)]) == 2


def test_cli_failing_check(tmp_path):
    doc = json.loads(json.dumps(MINIMAL_EL))
    doc["parameters"]["tol"] = 1e-30
    cfg = _write(tmp_path, doc)
    assert main(["--out", str(tmp_path / "o"), "run", str(cfg)]) == 1


def test_env_overrides_out(tmp_path, monkeypatch):
    env_out = tmp_path / "env"
    monkeypatch.setenv("RI_MECH_OUT", str(env_out))
    cfg = _write(tmp_path, MINIMAL_EL)
    assert main(["--out", str(tmp_path / "ignored"), "run", str(cfg)]) == 0
    assert (env_out / "mini" / "trajectory.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_cli_suite_parallel(tmp_path):
    d = tmp_path / "suite"
    d.mkdir()
    _write(d, MINIMAL_EL, "a.json")
    _write(d, {"registry": "bracket-table"}, "b.json")
    env = dict(os.environ)
    env.pop("RI_MECH_OUT", None)
    proc = subprocess.run([sys.executable, "-m", "rimech.cli", "--out", str(tmp_path / "o"), "--threads", "2",
                           "suite", str(d)], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert "2/2 checks passed" in proc.stdout


def test_shipped_scenarios_validate():
    for path in sorted((ROOT / "scenarios").glob("*.json")):
        sc.load_scenario(path)
