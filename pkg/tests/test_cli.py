import json

import pytest

from src.cli import CircleConjCLI, main
from src.constants import EXIT_CODES


@pytest.fixture
def zero_config(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({
        "name": "zero",
        "function": {"kind": "trig_poly", "params": {"terms": []}},
        "solver": {"n": 256},
    }), encoding="utf-8")
    return path


def test_no_arguments_shows_help():
    assert main([]) == EXIT_CODES["OK"]


def test_aliases_resolve_to_commands():
    cli = CircleConjCLI()
    assert cli.commands["run"] is cli.commands["solve"]
    assert cli.commands["fejer"] is cli.commands["counterexample"]
    assert cli.commands["oracle"] is cli.commands["ground-truth"]


def test_unknown_command_suggests(caplog):
    with caplog.at_level("INFO"):
        assert main(["slove"]) == EXIT_CODES["CONFIG_ERROR"]
    assert "solve" in caplog.text


def test_catalog_json(capsys):
    assert main(["catalog", "--json"]) == EXIT_CODES["OK"]
    kinds = json.loads(capsys.readouterr().out)
    assert {"trig_poly", "lacunary_sin", "weierstrass_cos", "piecewise_linear", "log_radius_of_map"} <= set(kinds)


def test_schema(capsys):
    assert main(["schema"]) == EXIT_CODES["OK"]
    assert "checks" in json.loads(capsys.readouterr().out)["properties"]


def test_solve_writes_report(zero_config, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(["solve", "--config", str(zero_config), "--out", str(out_dir), "--json"]) == EXIT_CODES["OK"]
    report = json.loads(capsys.readouterr().out)
    assert report["solve"]["converged"] is True
    assert report["grid"]["n"] == 256
    assert (out_dir / "zero_report.json").exists()
    assert (out_dir / "zero_series.csv").exists()


def test_solve_grid_override(zero_config, tmp_path, capsys):
    assert main(["solve", "--config", str(zero_config), "--grid", "64", "--out", str(tmp_path), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["grid"]["n"] == 64


def test_solve_rejects_bad_grid(zero_config, tmp_path):
    assert main(["solve", "--config", str(zero_config), "--grid", "100", "--out", str(tmp_path)]) == EXIT_CODES["CONFIG_ERROR"]


def test_solve_requires_config():
    assert main(["solve"]) == EXIT_CODES["CONFIG_ERROR"]


def test_solve_missing_config(tmp_path, monkeypatch):
    monkeypatch.setenv("CIRCLECONJ_EXPERIMENTS_DIR", str(tmp_path))
    assert main(["solve", "--config", "nowhere"]) == EXIT_CODES["CONFIG_ERROR"]


def test_verify_ground_truth(tmp_path, capsys):
    assert main(["ground-truth", "--beta", "0.3", "--grid", "512", "--out", str(tmp_path)]) == EXIT_CODES["OK"]
    config = tmp_path / "gt.json"
    config.write_text(json.dumps({
        "name": "gt",
        "function": {"kind": "log_radius_of_map", "params": {"beta": 0.3}},
        "solver": {"n": 512},
    }), encoding="utf-8")
    series = tmp_path / "ground_truth_beta0.3_series.csv"
    code = main(["verify", "--config", str(config), "--series", str(series), "--out", str(tmp_path), "--json"])
    assert code == EXIT_CODES["OK"]
    report = json.loads(capsys.readouterr().out)
    assert report["solve"]["iterations"] == 0
    assert report["checks"]["oracle"]["passed"] is True


def test_ground_truth_rejects_large_beta(tmp_path):
    assert main(["ground-truth", "--beta", "0.5", "--out", str(tmp_path)]) == EXIT_CODES["CONFIG_ERROR"]
    assert not list(tmp_path.iterdir())


def test_counterexample_json(capsys, tmp_path):
    assert main(["counterexample", "--N", "2", "8", "--json", "--out", str(tmp_path)]) == EXIT_CODES["OK"]
    rows = json.loads(capsys.readouterr().out)
    assert [row["N"] for row in rows] == [2, 8]
    assert rows[0]["closed_form"] < rows[1]["closed_form"]
    assert (tmp_path / "counterexample.csv").exists()


def test_counterexample_rejects_descending_orders():
    assert main(["fejer", "--N", "64", "16"]) == EXIT_CODES["CONFIG_ERROR"]


def test_help_for_command():
    assert main(["help", "verify"]) == EXIT_CODES["OK"]
