import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
import yaml

from qwalklab.cli import main, render
from qwalklab.experiments import CATALOG, Table, default_parameters, json_schema

CONFIGS = sorted((Path(__file__).resolve().parent.parent / "configs").glob("*.yaml"))
REQUIRED = {
    "walk-line", "walk-cycle", "ctqw", "noise-sweep", "symmetry",
    "cycle-turns", "recurrence", "mixing", "manybody", "entanglement",
}


@pytest.fixture(autouse=True)
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("QWALKLAB_OUTPUT_DIR", str(tmp_path / "out"))
    return tmp_path / "out"


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == 0 and out.out.strip() else None), out.err


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_list_experiments_catalog(capsys):
    assert main(["list-experiments"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert REQUIRED <= set(doc)
    assert doc["walk-line"]["properties"]["parameters"]["properties"]["theta"]["type"] == "number"


def test_list_unknown_name(capsys):
    assert main(["list-experiments", "no-such"]) == 1
    assert "no-such" in capsys.readouterr().err


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_example_config_validates(capsys, name):
    assert main(["example-config", name]) == 0
    cfg = yaml.safe_load(capsys.readouterr().out)
    jsonschema.validate(cfg, json_schema(name))
    assert cfg["parameters"] == default_parameters(name)


def test_walk_line_example(capsys, outdir):
    code, res, _ = run_json(capsys, ["walk-line", "--theta", "45", "--steps", "100", "--init", "symmetric"])
    assert code == 0
    rows = read_csv(res["output"])
    assert rows[0] == ["site", "probability"]
    assert len(rows) - 1 == 201
    assert abs(sum(float(r[1]) for r in rows[1:]) - 1) <= 1e-9
    assert Path(res["output"]).parent == outdir


def test_symmetry_example(capsys):
    code, res, _ = run_json(capsys, ["symmetry", "--op", "Z", "--channel", "phase-flip", "--p", "0.1", "--steps", "50"])
    assert code == 0
    assert res["summary"]["kolmogorov"] < 1e-8


def test_manybody_example(capsys):
    argv = ["manybody", "--particles", "40", "--init", "mi", "--steps", "40", "--theta", "45"]
    code, res, _ = run_json(capsys, argv)
    assert code == 0
    rows = read_csv(res["output"])
    assert rows[0] == ["site", "n_j"]
    assert abs(sum(float(r[1]) for r in rows[1:]) - 40) < 1e-9
    assert res["summary"]["support_half_width"] > 40


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("experiment: walk-line\nseed: 3\nparameters:\n  steps: 10\n  theta: 30\n")
    code, res, _ = run_json(capsys, ["run", str(cfg), "--steps", "4", "--format", "json"])
    assert code == 0
    meta = json.loads(Path(res["meta"]).read_text())
    assert meta["parameters"]["steps"] == 4 and meta["parameters"]["theta"] == 30
    assert meta["seed"] == 3 and meta["format"] == "json"
    assert len(json.loads(Path(res["output"]).read_text())["rows"]) == 9


@pytest.mark.parametrize(
    "argv",
    [
        ["walk-line", "--steps", "-1"],
        ["walk-line", "--theta", "nan"],
        ["walk-line", "--init", "sideways"],
        ["walk-line", "--no-such-flag", "1"],
        ["no-such-experiment"],
        ["symmetry", "--channel", "bit-flip", "--p", "1.5"],
    ],
)
def test_bad_input_exit_one(capsys, argv):
    assert main(argv) == 1
    assert capsys.readouterr().err.strip()


def test_bad_config_exit_one(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("experiment: walk-line\nparameters:\n  steps: many\n")
    assert main(["run", str(bad)]) == 1
    bad.write_text("experiment: walk-line\nparameters: [1, 2\n")
    assert main(["run", str(bad)]) == 1
    assert main(["run", str(tmp_path / "missing.yaml")]) == 1


def test_density_cap_rejected(capsys):
    assert main(["walk-line", "--channel", "bit-flip", "--p", "0.1", "--steps", "301"]) == 1
    assert "300" in capsys.readouterr().err


def test_unwritable_output_nonzero(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["walk-line", "--steps", "2", "--output", str(blocker / "x.csv")])
    assert code != 0
    assert capsys.readouterr().err.strip()


def test_sidecar_contents(capsys):
    code, res, _ = run_json(capsys, ["walk-cycle", "--n", "11", "--steps", "7", "--seed", "5"])
    assert code == 0
    meta = json.loads(Path(res["meta"]).read_text())
    for key in ("experiment", "parameters", "seed", "software", "wall_time_s", "data_file", "angles"):
        assert key in meta
    assert meta["software"]["qwalklab"]
    assert meta["data_file"] == Path(res["output"]).name


def test_json_mirrors_csv(capsys, tmp_path):
    base = ["theta-sweep", "--thetas", "20", "50"]
    main([*base, "--output", str(tmp_path / "a.csv")])
    main([*base, "--format", "json", "--output", str(tmp_path / "a.json")])
    capsys.readouterr()
    rows = read_csv(tmp_path / "a.csv")
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["columns"] == rows[0]
    assert [[repr(float(x)) for x in r] for r in doc["rows"]] == [[repr(float(x)) for x in r] for r in rows[1:]]


def test_render_nan_and_booleans():
    t = Table(["a", "b"], [[float("nan"), True]], {"x": float("inf")})
    assert render(t, "csv").splitlines()[1] == "nan,true"
    doc = json.loads(render(t, "json"))
    assert doc["rows"] == [[None, True]] and doc["summary"] == {"x": None}


@pytest.mark.parametrize("cfg", CONFIGS, ids=[c.stem for c in CONFIGS])
def test_shipped_configs_run(capsys, tmp_path, cfg):
    code = main(["run", str(cfg), "--output", str(tmp_path / f"{cfg.stem}.csv")])
    assert code == 0, capsys.readouterr().err
    assert len(read_csv(tmp_path / f"{cfg.stem}.csv")) > 1


def test_module_entry_point(tmp_path):
    env = dict(os.environ, QWALKLAB_OUTPUT_DIR=str(tmp_path))
    proc = subprocess.run(
        [sys.executable, "-m", "qwalklab", "walk-line", "--steps", "3"], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "walk-line.csv").exists()
    proc = subprocess.run([sys.executable, "-m", "qwalklab", "walk-line", "--theta", "x"], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stderr
