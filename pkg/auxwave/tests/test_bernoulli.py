import numpy as np
import pytest

from auxwave import bernoulli
from auxwave.bernoulli import (
    AuxEquation,
    ClassicalBernoulli,
    classical_solution,
    classical_sweep,
    integrating_factor,
    solve_general,
    value_at,
    verify_aux,
)
from auxwave.catalog import DEFAULT_PARAMS, catalog_entry
from auxwave.exceptions import ConfigError, ExpressionError
from auxwave.expr import XI, has_integral, mul, subs
from auxwave.numeric import equal_numeric, evaluate, find_pole_free_interval, grid_derivative
from auxwave.parser import parse

OTHER_PARAMS = {"A": 2, "B": -1, "C": 0.5, "C1": 3}


def test_equation_validation():
    with pytest.raises(ExpressionError):
        AuxEquation.from_text("A", "B", n=1)
    with pytest.raises(ExpressionError):
        AuxEquation.from_text("A*z", "B")
    assert AuxEquation.from_text("A*xi", "exp(C*xi)").parameters == {"A", "C"}


@pytest.mark.parametrize("index", [3, 4, 5, 6])
@pytest.mark.parametrize("params", [DEFAULT_PARAMS, OTHER_PARAMS])
def test_general_solution_matches_catalog(index, params):
    entry = catalog_entry(index)
    general = solve_general(entry.equation)
    assert general.form == "closed"
    catalog_z = subs(entry.solution.z, params)
    ours = subs(entry.in_general_form(general.z), params)
    lo, hi = find_pole_free_interval(catalog_z, "xi", {})
    assert equal_numeric(ours, catalog_z, {"xi": np.linspace(lo, hi, 50)}, tol=1e-9)


def test_general_solution_keeps_quadrature():
    general = solve_general(AuxEquation.from_text("A*xi", "sin(xi^2)"))
    assert general.form == "quadrature"
    eq = AuxEquation.from_text("A*xi", "sin(xi^2)")
    report = verify_aux(eq, general, {"A": 1, "C1": 5}, (-1, 1), 41, 1e-8)
    assert report.passed


def test_higher_bernoulli_exponent():
    eq = AuxEquation.from_text("1", "1", n=3)
    sol = solve_general(eq)
    report = verify_aux(eq, sol, {"C1": 2}, (-3, 0), 61, 1e-10)
    assert report.passed


def test_classical_logistic_branch():
    cb = ClassicalBernoulli(1, -1, 2)
    z = classical_solution(cb, "I")
    assert equal_numeric(z, parse("exp(xi)/(1 + exp(xi))"), {"xi": np.linspace(-5, 5, 21)})
    assert verify_aux(cb.equation(), z, {}, (-5, 5), 101, 1e-10).passed
    assert value_at(z, {}, 0) == pytest.approx(0.5)


def test_classical_rejects_zero_coefficients():
    with pytest.raises(ExpressionError):
        ClassicalBernoulli(0, 1, 2)
    with pytest.raises(ExpressionError):
        ClassicalBernoulli(1, 1, 1)


def test_classical_sweep_reports_every_combination():
    rows = classical_sweep(values=(-1.0, 1.0), ks=(2, 3), npoints=41)
    assert len(rows) == 16
    assert {(r.a, r.b, r.branch) for r in rows} == {
        (a, b, br) for a in (-1.0, 1.0) for b in (-1.0, 1.0) for br in ("I", "II")
    }
    assert all(r.passed for r in rows if r.branch == "I")


def test_unbound_parameters_are_a_config_error():
    entry = catalog_entry(4)
    with pytest.raises(ConfigError):
        verify_aux(entry.equation, entry.solution, {"A": 1}, (-1, 1), 11, 1e-8)


def test_numeric_derivative_mode():
    entry = catalog_entry(2)
    z = subs(entry.solution.z, DEFAULT_PARAMS)
    interval = find_pole_free_interval(z, XI.name, {})
    report = verify_aux(
        entry.equation, entry.solution, DEFAULT_PARAMS, interval, 21, 1e-6, derivative="numeric"
    )
    assert report.passed


RULE_TABLE_SHAPES = [
    "({a})*xi^2 + ({b})*xi + ({c})",
    "({a})*exp(({b})*xi)",
    "({a})*sin(({b})*xi) + ({c})",
    "({a})*cos(({b})*xi)",
    "({a})*xi*exp(({b})*xi)",
]


@pytest.mark.parametrize("seed", range(10))
def test_integrating_factor_solves_its_linear_equation(seed):
    rng = np.random.default_rng(seed)
    shape = RULE_TABLE_SHAPES[seed % len(RULE_TABLE_SHAPES)]
    a, c = np.round(rng.uniform(-1, 1, 2), 3)
    b = round(float(rng.choice([-1, 1]) * rng.uniform(0.5, 1.5)), 3)
    eq = AuxEquation.from_text(shape.format(a=a, b=b, c=c), "1")
    mu = integrating_factor(eq)
    assert not has_integral(mu)
    xi = rng.uniform(-1, 1, 20)
    derivative = grid_derivative(mu, "xi", xi)
    expected = evaluate(mul(eq.P, mu), {"xi": xi})
    assert np.all(np.abs(derivative - expected) <= 1e-10 * np.maximum(1, np.abs(expected)))


def test_integrating_factor_of_constant_coefficient():
    assert integrating_factor(AuxEquation.from_text("A", "B")) == parse("exp(A*xi)")


def test_quadrature_solution_takes_the_numeric_derivative(monkeypatch):
    entry = catalog_entry(1)
    params = {"A": 0.25, "B": 1, "C1": 1}
    assert entry.solution.form == "quadrature"
    interval = find_pole_free_interval(subs(entry.solution.z, params), XI.name, {})
    assert interval == (-1.5, 0.5)

    def no_symbolic(*args):
        raise AssertionError("symbolic derivative used")

    monkeypatch.setattr(bernoulli, "differentiate", no_symbolic)
    report = verify_aux(entry.equation, entry.solution, params, interval, 101, 1e-8)
    assert report.passed, report.summary()


def test_large_solutions_are_judged_by_the_absolute_residual():
    # z' - z = 0.1 exp(xi): tiny against the terms, large in absolute value
    eq = AuxEquation.from_text("1", "0")
    z = parse("100000000*exp(xi)*(1 + xi/1000000000)")
    report = verify_aux(eq, z, {}, (-5, 5), 101, 1e-8)
    assert not report.passed
    assert report.max_abs == pytest.approx(0.1 * np.exp(5), rel=1e-4)
    assert report.worst_point == 5.0
    assert report.max_scaled < 1e-8
