import json
from pathlib import Path

import jsonschema
import pytest

from auxwave.bernoulli import value_at, verify_aux
from auxwave.catalog import (
    CATALOG,
    DEFAULT_PARAMS,
    case1_reduced,
    catalog_entry,
    export_catalog_json,
)
from auxwave.exceptions import AuxwaveError, CatalogIndexError
from auxwave.expr import XI, subs
from auxwave.numeric import find_pole_free_interval
from auxwave.parser import parse

SCHEMAS = Path(__file__).resolve().parents[2] / "schemas"
ERRATA = {1, 3, 17, 19, 20}


def _window(entry):
    return find_pole_free_interval(subs(entry.solution.z, DEFAULT_PARAMS), XI.name, {})


def test_twenty_entries_in_order():
    assert [e.index for e in CATALOG] == list(range(1, 21))
    assert catalog_entry(4).solution.z == parse("A/(-B + exp(-A*xi)*C1*A)")


@pytest.mark.parametrize("index", [0, 21, -1])
def test_index_out_of_range(index):
    with pytest.raises(CatalogIndexError):
        catalog_entry(index)


@pytest.mark.parametrize("index", range(1, 21))
def test_every_case_solves_its_equation(index):
    entry = catalog_entry(index)
    report = verify_aux(entry.equation, entry.solution, DEFAULT_PARAMS, _window(entry), 101, 1e-8)
    assert report.passed, report.summary()


def test_errata_are_the_expected_rows():
    assert {e.index for e in CATALOG if e.has_erratum} == ERRATA


@pytest.mark.parametrize("index", sorted(ERRATA))
def test_printed_rows_do_not_solve_their_equation(index):
    entry = catalog_entry(index)
    try:
        report = verify_aux(
            entry.printed_equation,
            entry.printed_solution,
            DEFAULT_PARAMS,
            _window(entry),
            101,
            1e-8,
        )
    except AuxwaveError:
        return
    assert not report.passed


def test_case1_starts_at_one():
    params = {"A": 0.25, "B": 1, "C1": 1}
    assert value_at(catalog_entry(1).solution, params, 0) == pytest.approx(1)


def test_case1_reduced():
    eq, sol = case1_reduced()
    assert eq.P == parse("B^2")
    report = verify_aux(eq, sol, {"B": 1, "C1": 1}, (-5, 5), 101, 1e-10)
    assert report.passed
    assert any(p.point == 0.0 for p in report.excluded_points)


def test_case10_constant_map():
    entry = catalog_entry(10)
    assert "Ei1" in str(entry.general_constant())
    assert catalog_entry(4).general_constant() == parse("C1")


def test_export_matches_schema():
    rows = json.loads(export_catalog_json())
    schema = json.loads((SCHEMAS / "catalog.schema.json").read_text())
    jsonschema.validate(rows, schema)
    assert [r["index"] for r in rows] == list(range(1, 21))
    assert set(rows[0]) == {"index", "P", "Q", "z"}


def test_complex_evaluation_is_reported():
    logistic = catalog_entry(4)
    real = verify_aux(
        logistic.equation, logistic.solution, {"A": 1, "B": -1, "C1": 1}, (-5, 5), 101, 1e-10
    )
    assert real.passed and not real.complex_evaluation
    entry = catalog_entry(9)
    report = verify_aux(entry.equation, entry.solution, DEFAULT_PARAMS, _window(entry), 101, 1e-8)
    assert report.complex_evaluation
