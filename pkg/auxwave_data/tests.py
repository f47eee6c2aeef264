import csv
import json
from io import StringIO
from pathlib import Path

import jsonschema
import pytest
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError

from auxwave.exceptions import (
    CatalogIndexError,
    ConfigError,
    ParseError,
    PoleError,
    QuadratureError,
    UnsolvedError,
    VerificationError,
)
from auxwave_data.management.base import AuxwaveCommand, exit_code
from auxwave_data.models import CatalogCase, PipelineRun, VerificationRun

SCHEMAS = Path(settings.BASE_DIR) / "schemas"
RECIPES = Path(settings.BASE_DIR) / "docs" / "recipes"


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return out.getvalue()


def returncode(*args):
    with pytest.raises(CommandError) as info:
        run(*args)
    return info.value.returncode


@pytest.mark.parametrize(
    ("err", "code"),
    [
        (ConfigError("bad"), 2),
        (ParseError("unexpected", 3), 2),
        (CatalogIndexError(21), 2),
        (PoleError("pole"), 3),
        (QuadratureError("slow"), 3),
        (VerificationError("empty"), 3),
        (UnsolvedError("none"), 3),
    ],
)
def test_exit_codes(err, code):
    assert exit_code(err) == code


def test_run_config_reads_settings(settings):
    settings.AUXWAVE_TOL = 1e-3
    settings.AUXWAVE_NPOINTS = 7
    config = AuxwaveCommand().run_config({"params": ["A=1"]}, "test")
    assert config.tol == 1e-3
    assert config.npoints == 7
    assert config.params == {"A": 1}
    overridden = AuxwaveCommand().run_config({"npoints": 9, "interval": ["-1", "1"]}, "test")
    assert overridden.npoints == 9
    assert overridden.interval == (-1.0, 1.0)


# Catalog


@pytest.mark.django_db
def test_load_catalog_is_idempotent():
    run("load_catalog")
    assert CatalogCase.objects.count() == 20
    output = run("load_catalog")
    assert "0 created, 20 updated" in output
    assert CatalogCase.objects.count() == 20
    assert CatalogCase.objects.exclude(erratum="").count() == 5
    assert CatalogCase.objects.get(index=4).z == "A/(-B + exp(-A*xi)*C1*A)"


def test_catalog_list():
    lines = run("catalog", "list").splitlines()
    assert [line.split()[0] for line in lines[:20]] == [str(i) for i in range(1, 21)]


def test_catalog_show():
    output = run("catalog", "show", "4")
    assert "P = A" in output
    assert "z = A/(-B + exp(-A*xi)*C1*A)" in output
    shown = json.loads(run("catalog", "show", "3", "--json"))
    assert shown["index"] == 3
    assert shown["erratum"]


@pytest.mark.parametrize("args", [("show", "21"), ("show", "0"), ("show",)])
def test_catalog_show_bad_index(args):
    assert returncode("catalog", *args) == 2


def test_catalog_export(tmp_path):
    path = tmp_path / "catalog.json"
    run("catalog", "export", "--out", str(path))
    rows = json.loads(path.read_text())
    jsonschema.validate(rows, json.loads((SCHEMAS / "catalog.schema.json").read_text()))
    assert len(rows) == 20


def test_catalog_errata(tmp_path):
    path = tmp_path / "errata.json"
    output = run("catalog", "errata", "--npoints", "51", "--out", str(path))
    assert "Case  1" in output
    rows = json.loads(path.read_text())
    assert [r["index"] for r in rows] == [1, 3, 17, 19, 20]


# verify_aux


@pytest.mark.django_db
def test_verify_logistic_case_is_stored():
    run("load_catalog")
    output = run(
        "verify_aux", "--case", "4", "--params", "A=1,B=-1,C1=1", "--interval", "-5", "5"
    )
    assert "PASS" in output
    stored = VerificationRun.objects.get()
    assert stored.kind == "aux"
    assert stored.case.index == 4
    assert stored.passed
    assert stored.max_residual <= 1e-10
    assert stored.parameters == {"A": "1", "B": "-1", "C1": "1"}


@pytest.mark.django_db
@pytest.mark.parametrize(
    "grid",
    [
        ("--interval", "-1.5", "0.5"),
        ("--interval", "-2", "2", "--derivative", "symbolic"),
    ],
)
def test_verify_case1_at_figure_parameters(grid):
    output = run(
        "verify_aux", "--case", "1", "--params", "A=0.25,B=1,C1=1", *grid, "--no-store"
    )
    assert "PASS" in output
    assert VerificationRun.objects.count() == 0


@pytest.mark.django_db
def test_verify_json_report(tmp_path):
    path = tmp_path / "report.json"
    output = run(
        "verify_aux",
        "--classical",
        "1",
        "-1",
        "2",
        "--json",
        "--out",
        str(path),
        "--no-store",
    )
    report = json.loads(output)
    assert report["passed"]
    schema = json.loads((SCHEMAS / "residual_report.schema.json").read_text())
    jsonschema.validate(json.loads(path.read_text()), schema)


@pytest.mark.django_db
def test_verify_general_solution_of_cubic_equation():
    output = run(
        "verify_aux",
        "--P",
        "A",
        "--Q",
        "B",
        "--n",
        "3",
        "--params",
        "A=1,B=-1,C1=2",
        "--interval",
        "-3",
        "0",
        "--no-store",
    )
    assert "PASS" in output


@pytest.mark.django_db
def test_verify_failure_exit_code():
    code = returncode(
        "verify_aux", "--case", "4", "--z", "xi", "--params", "A=1,B=-1,C1=1"
    )
    assert code == 1
    assert VerificationRun.objects.get().passed is False


@pytest.mark.django_db
@pytest.mark.parametrize(
    "args",
    [
        ("--case", "4", "--params", "A=1"),
        ("--case", "4", "--params", "A=1,B=-1,C1=1", "--interval", "1", "1"),
        ("--case", "4", "--params", "A=x"),
        ("--P", "A +", "--Q", "B"),
        ("--P", "A"),
        ("--classical", "0", "1", "2"),
    ],
)
def test_verify_usage_errors(args):
    assert returncode("verify_aux", *args, "--no-store") == 2


# pipeline


@pytest.mark.django_db
def test_pipeline_reduced_case1(tmp_path):
    output = run(
        "pipeline",
        "--aux-case",
        "case1-reduced",
        "--params",
        "B=1,C1=1",
        "--tol",
        "1e-6",
        "--out",
        str(tmp_path),
    )
    assert "Balance: N = 2" in output
    run_ = PipelineRun.objects.get()
    assert run_.status == "solved"
    assert run_.passed
    assert run_.balance_order == 2
    assert run_.equation_count == 8
    assert run_.verifications.filter(kind="ode", passed=True).exists()
    stored = json.loads((tmp_path / "result.json").read_text())
    jsonschema.validate(stored, json.loads((SCHEMAS / "pipeline_result.schema.json").read_text()))


@pytest.mark.django_db
def test_pipeline_export(tmp_path):
    run("pipeline", "--aux-case", "1", "--strategy", "export", "--out", str(tmp_path))
    assert (tmp_path / "system.txt").exists()
    sidecar = json.loads((tmp_path / "system.json").read_text())
    jsonschema.validate(sidecar, json.loads((SCHEMAS / "system.schema.json").read_text()))
    assert PipelineRun.objects.get().status == "exported"


@pytest.mark.django_db
def test_pipeline_unsolved_exits_with_numeric_failure(tmp_path):
    code = returncode("pipeline", "--aux-case", "1", "--out", str(tmp_path))
    assert code == 3
    assert PipelineRun.objects.get().status == "unsolved"
    assert (tmp_path / "system.txt").exists()


@pytest.mark.django_db
def test_pipeline_printed_reduction_cross_check(tmp_path):
    output = run(
        "pipeline",
        "--aux-case",
        "1",
        "--ode",
        "paper-eq8",
        "--strategy",
        "export",
        "--params",
        "A=1/4,B=1,c=1,g0=0",
        "--out",
        str(tmp_path),
        "--no-store",
    )
    assert "Cross-check: top equation z^6" in output
    assert (tmp_path / "cross_check.csv").exists()
    assert PipelineRun.objects.count() == 0


@pytest.mark.django_db
@pytest.mark.parametrize(
    "args",
    [
        ("--b", "x"),
        ("--mu", "1/0"),
        ("--order", "0"),
        ("--ode", "paper-eq8", "--b", "-1"),
    ],
)
def test_pipeline_usage_errors(tmp_path, args):
    assert returncode("pipeline", *args, "--strategy", "export", "--out", str(tmp_path)) == 2


# sample and classical_sweep


def test_sample_recipe_dir(tmp_path):
    output = run("sample", "--recipe-dir", str(RECIPES), "--out", str(tmp_path))
    for name in ("figure1", "figure2a", "figure2b", "figure3"):
        assert name in output
        with open(tmp_path / f"{name}.csv", newline="") as fh:
            table = list(csv.reader(fh))
        assert table[0] == ["xi", "re", "im"]
        assert len(table) > 100


def test_sample_constant_expression(tmp_path):
    expr = tmp_path / "flat.txt"
    expr.write_text("2*A\n")
    out = tmp_path / "flat.csv"
    run("sample", "--expr-file", str(expr), "--params", "A=1", "--npoints", "5", "--out", str(out))
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert {float(r["re"]) for r in rows} == {2.0}


def test_sample_solution_file(tmp_path):
    wave = tmp_path / "wave.json"
    wave.write_text(json.dumps({"u": "1/(1 + exp(-xi))", "c": "2", "mu": "1"}))
    out = tmp_path / "wave.csv"
    run(
        "sample",
        "--solution-file",
        str(wave),
        "--interval",
        "-1",
        "1",
        "--npoints",
        "5",
        "--t-interval",
        "0",
        "1",
        "--t-points",
        "3",
        "--out",
        str(out),
    )
    with open(out, newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["x", "t", "re", "im"]
    assert len(table) == 16


@pytest.mark.parametrize(
    "body",
    ['{"u": "xi", "c": "1"}', "not json", '{"u": "xi +", "c": "1", "mu": "1"}'],
)
def test_sample_bad_solution_file(tmp_path, body):
    wave = tmp_path / "bad.json"
    wave.write_text(body)
    assert returncode("sample", "--solution-file", str(wave), "--out", str(tmp_path / "x.csv")) == 2


def test_sample_unbound_expression(tmp_path):
    expr = tmp_path / "curve.txt"
    expr.write_text("A*xi")
    assert returncode("sample", "--expr-file", str(expr), "--out", str(tmp_path / "c.csv")) == 2


def test_classical_sweep(tmp_path):
    path = tmp_path / "sweep.csv"
    output = run("classical_sweep", "--npoints", "41", "--out", str(path))
    assert "Branch I: 8/8 pass" in output
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 16
    assert {r["branch"] for r in rows} == {"I", "II"}
