import csv
import json
from pathlib import Path

import jsonschema
import pytest

from auxwave.catalog import catalog_entry
from auxwave.exceptions import ConfigError
from auxwave.expr import XI, ZERO
from auxwave.reports import (
    CROSS_CHECK_POINTS,
    PRINTED_EQ6,
    case1_cross_check,
    errata_report,
    printed_case1_coefficients,
    write_cross_check,
)
from auxwave.waves import Ansatz, b_equation, derive_system, reduce_travelling

SCHEMAS = Path(__file__).resolve().parents[2] / "schemas"


def test_printed_coefficients_parse():
    coefficients = printed_case1_coefficients()
    assert coefficients["g1"] == ZERO
    assert coefficients["g2"].free_symbols == {"A", "B", "c", "g0", XI.name}


def test_cross_check_is_deterministic(tmp_path):
    first = case1_cross_check()
    second = case1_cross_check()
    assert first.to_dict() == second.to_dict()
    assert len(first.rows) == len(CROSS_CHECK_POINTS)
    assert first.top == 6
    assert first.printed_top == PRINTED_EQ6
    assert all(len(row["equations"]) == 8 for row in first.rows)

    schema = json.loads((SCHEMAS / "cross_check.schema.json").read_text())
    jsonschema.validate(first.to_dict(), schema)

    write_cross_check(first, tmp_path)
    stored = json.loads((tmp_path / "cross_check.json").read_text())
    assert stored["top"] == 6
    with open(tmp_path / "cross_check.csv", newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["xi"] + [f"abs_eq{i}" for i in range(8)]
    assert len(table) == len(CROSS_CHECK_POINTS) + 1


def test_cross_check_needs_bound_parameters():
    ode = reduce_travelling(b_equation(-2), "paper-eq8")
    system = derive_system(ode, Ansatz(2), catalog_entry(3).equation, "3")
    with pytest.raises(ConfigError):
        case1_cross_check(system=system)


def test_errata_report():
    rows = errata_report(npoints=51)
    assert [r["index"] for r in rows] == [1, 3, 17, 19, 20]
    assert all(r["consistent"]["passed"] for r in rows)
    assert not any(r["printed"]["passed"] for r in rows)
