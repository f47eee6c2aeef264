import json
import re
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from auxwave.bernoulli import AuxEquation
from auxwave.catalog import catalog_case
from auxwave.exceptions import ConfigError, NotPolynomialError, UnsolvedError
from auxwave.parser import parse
from auxwave.solver import MultiPoly, export_system, solve_polynomials, solve_system
from auxwave.waves import Ansatz, CoeffSystem, b_equation, derive_system, reduce_travelling

SCHEMAS = Path(__file__).resolve().parents[2] / "schemas"


def _system(*equations, unknowns=("g0", "g1"), order=1):
    return CoeffSystem(
        tuple(parse(e) for e in equations),
        unknowns,
        (),
        AuxEquation(1, 1),
        "mechanical",
        order,
    )


def _values(assignments):
    return sorted(
        tuple(round(v.real, 8) for _, v in sorted(a.values.items())) for a in assignments
    )


def test_multipoly_from_expression():
    p = MultiPoly.from_expr(parse("2*g0*g1^2 + 3"), ["g0", "g1"])
    assert p(np.array([1, 2])) == pytest.approx(11)
    assert p.degree_in(1) == 2
    with pytest.raises(NotPolynomialError):
        MultiPoly.from_expr(parse("exp(g0)"), ["g0"])


def test_triangular_system():
    found = solve_polynomials([parse("2*g1"), parse("g2 - 3")], ["g1", "g2"], nonzero=["g2"])
    assert len(found) == 1
    assert found[0].values == {"g1": 0, "g2": 3}
    assert found[0].free == ()


def test_univariate_roots():
    assert _values(solve_polynomials([parse("g0^2 - 4")], ["g0"])) == [(-2.0,), (2.0,)]


def test_nonzero_excludes_the_trivial_root():
    assert _values(solve_polynomials([parse("g0^2 - g0")], ["g0"])) == [(0.0,), (1.0,)]
    assert _values(solve_polynomials([parse("g0^2 - g0")], ["g0"], nonzero=["g0"])) == [(1.0,)]


def test_inconsistent_system_has_no_assignment():
    assert solve_polynomials([parse("g0 - 1"), parse("g0 - 2")], ["g0"]) == []


def test_free_unknowns_are_reported():
    (found,) = solve_polynomials([parse("g0 - g1")], ["g0", "g1"])
    assert found.free == ("g1",)
    assert found.values["g0"] == found.values["g1"]


def test_fallback_polishes_to_true_roots():
    found = solve_polynomials([parse("g0^2 + g1^2 - 5"), parse("g0*g1 - 2")], ["g0", "g1"])
    assert found
    expected = {(1.0, 2.0), (2.0, 1.0), (-1.0, -2.0), (-2.0, -1.0)}
    assert set(_values(found)) <= expected
    assert all(a.residual <= 1e-10 for a in found)


def test_export_format(tmp_path):
    aux, _ = catalog_case(1)
    system = derive_system(reduce_travelling(b_equation(-2)), Ansatz(2), aux, "1")
    path = export_system(system, tmp_path)
    lines = path.read_text().splitlines()
    assert len(lines) == len(system.equations)
    assert all(re.fullmatch(r"eq\[\d+\] := .+ = 0;", line) for line in lines)
    sidecar = json.loads((tmp_path / "system.json").read_text())
    assert sidecar["unknowns"] == ["g0", "g1", "g2", "c"]
    assert sidecar["aux_case"] == "1"
    schema = json.loads((SCHEMAS / "system.schema.json").read_text())
    jsonschema.validate(sidecar, schema)


def test_constant_strategy_refuses_xi(tmp_path):
    with pytest.raises(UnsolvedError) as info:
        solve_system(_system("g1 - xi"), "constant", tmp_path)
    assert info.value.export_path == tmp_path / "system.txt"
    assert info.value.export_path.exists()


def test_unbound_parameters():
    with pytest.raises(ConfigError):
        solve_system(_system("A*g1 - 1"), "constant")


def test_pointwise_strategy():
    moving = solve_system(_system("g1 - xi - 2", unknowns=("g1",)), "pointwise")
    report = moving.pointwise
    assert report.xi_points == [-1.0, -0.5, 0.0, 0.5, 1.0]
    (family,) = report.families
    assert all(a is not None for _, a in family.rows)
    assert family.spread["g1"] == pytest.approx(2)
    assert not family.xi_independent
    assert not report.xi_independent
    fixed = solve_system(_system("g1 - 2", unknowns=("g1",)), "pointwise")
    assert fixed.pointwise.xi_independent


def test_pointwise_keeps_coexisting_roots_apart():
    report = solve_system(_system("g1^2 - 3*g1 + 2", unknowns=("g1",)), "pointwise").pointwise
    assert len(report.families) == 2
    roots = []
    for family in report.families:
        assert family.xi_independent
        assert family.spread["g1"] == pytest.approx(0, abs=1e-9)
        values = {round(a.values["g1"].real, 8) for _, a in family.rows}
        assert len(values) == 1
        roots.extend(values)
    assert sorted(roots) == [1, 2]


def test_pointwise_separates_a_moving_root_from_a_fixed_one():
    system = _system("(g1 - xi - 2)*(g1 + 5)", unknowns=("g1",))
    report = solve_system(system, "pointwise", xi_points=(-1, 0, 1, 2, 3, 4)).pointwise
    assert len(report.families) == 2
    moving, fixed = sorted(report.families, key=lambda f: f.xi_independent)
    assert fixed.xi_independent
    assert all(a.values["g1"] == pytest.approx(-5) for _, a in fixed.rows)
    assert not moving.xi_independent
    assert [a.values["g1"].real for _, a in moving.rows] == pytest.approx([1, 2, 3, 4, 5, 6])
    assert report.xi_independent


def test_export_strategy_needs_a_directory():
    with pytest.raises(ConfigError):
        solve_system(_system("g1 - 1"), "export")
