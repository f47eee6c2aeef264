import csv
import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from auxwave.config import RunConfig, load_recipe
from auxwave.exceptions import ConfigError, UnsolvedError
from auxwave.figures import (
    FigureData,
    run_recipe,
    sample_recipe,
    sample_solution,
    solution_from_dict,
    write_figure,
)
from auxwave.pipeline import reduced_case1_config, run_pipeline

ROOT = Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
RECIPES = ROOT / "docs" / "recipes"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


def test_reduced_case1_end_to_end(tmp_path):
    result = run_pipeline(reduced_case1_config(tol=1e-6, out_dir=tmp_path))
    assert result.status == "solved"
    assert result.balance.order == 2
    assert result.passed
    stored = json.loads((tmp_path / "result.json").read_text())
    jsonschema.validate(stored, _schema("pipeline_result.schema.json"))
    assert stored["status"] == "solved"
    assert any(s["passed"] for s in stored["solutions"])


def test_export_strategy_writes_the_system(tmp_path):
    config = RunConfig(command="pipeline", aux_case="1", strategy="export", out_dir=tmp_path)
    result = run_pipeline(config)
    assert result.status == "exported"
    assert result.export_path == tmp_path / "system.txt"
    assert (tmp_path / "system.txt").exists()
    assert result.records == []


def test_constant_strategy_on_case1_is_unsolved(tmp_path):
    config = RunConfig(command="pipeline", aux_case="1", out_dir=tmp_path)
    with pytest.raises(UnsolvedError) as info:
        run_pipeline(config)
    assert info.value.export_path is not None
    stored = json.loads((tmp_path / "result.json").read_text())
    assert stored["status"] == "unsolved"


def test_printed_reduction_attaches_cross_check(tmp_path):
    config = RunConfig(
        command="pipeline",
        aux_case="1",
        mode="paper-eq8",
        strategy="export",
        params={"A": 0.25, "B": 1, "c": 1, "g0": 0},
        out_dir=tmp_path,
    )
    result = run_pipeline(config)
    assert result.cross_check is not None
    assert (tmp_path / "cross_check.json").exists()
    stored = json.loads((tmp_path / "result.json").read_text())
    jsonschema.validate(stored, _schema("pipeline_result.schema.json"))


@pytest.mark.parametrize("name", ["figure1", "figure2a", "figure2b", "figure3"])
def test_shipped_recipes_sample(name):
    data = sample_recipe(load_recipe(RECIPES / f"{name}.cfg"))
    assert data.name == name
    assert len(data.rows) > len(data.excluded)
    assert data.finite


def test_figure2b_matches_the_reduced_aux_curve():
    data = sample_recipe(load_recipe(RECIPES / "figure2b.cfg"))
    xi = np.array([r[0] for r in data.rows])
    re = np.array([r[1] for r in data.rows])
    assert data.real
    assert np.allclose(re, 1 / (np.exp(-xi) - 1), rtol=1e-10, atol=1e-10)
    assert 0.0 in data.excluded


def test_aux_recipe_value_at_origin(tmp_path):
    path = tmp_path / "case1.cfg"
    path.write_text(
        "kind = aux\ncase = 1\nparams = A=1/4, B=1, C1=1\ninterval = -1 1\nnpoints = 3\n"
    )
    data = sample_recipe(load_recipe(path))
    origin = {r[0]: r[1] for r in data.rows}
    assert origin[0.0] == pytest.approx(1)


def test_write_figure(tmp_path):
    data = FigureData("demo", "expression", ["xi", "re", "im"], [[0.0, 1.0, 0.0], [1.0, 2.0, 0.0]])
    path = write_figure(data, tmp_path / "demo.csv")
    with open(path, newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["xi", "re", "im"]
    assert len(table) == 3
    assert data.summary()["path"] == str(path)


def test_run_recipe_with_time_grid(tmp_path):
    path = tmp_path / "wave.cfg"
    path.write_text(
        "kind = composed\ncase = 4\nparams = A=1, B=-1, C1=1\n"
        "coefficients = g0=0, g1=1, g2=0\nc = 2\n"
        "interval = -1 1\nnpoints = 5\nt_interval = 0 1\nt_points = 3\n"
    )
    data = run_recipe(load_recipe(path), tmp_path)
    assert data.header == ["x", "t", "re", "im"]
    assert len(data.rows) == 15
    assert (tmp_path / "wave.csv").exists()


def test_solution_from_dict_binds_params():
    sol = solution_from_dict(
        {"u": "g2*z0", "c": "c", "mu": "1", "params": {"g2": "2", "z0": "1/4", "c": "3"}}
    )
    data = sample_solution("flat", sol, (-1, 1), 3)
    assert [r[1] for r in data.rows] == [0.5, 0.5, 0.5]
    with pytest.raises(ConfigError):
        solution_from_dict({"u": "xi", "c": "1"})
