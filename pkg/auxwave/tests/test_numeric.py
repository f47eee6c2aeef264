import math

import numpy as np
import pytest
from scipy import special

from auxwave.exceptions import (
    PoleError,
    QuadratureError,
    StencilError,
    UnboundSymbolError,
    VerificationError,
)
from auxwave.expr import XI, integral
from auxwave.numeric import (
    QuadratureSpec,
    ei1,
    equal_numeric,
    erf,
    evaluate,
    expression_function,
    find_pole_free_interval,
    integrate,
    numeric_diff,
    realness,
    sample_curve,
)
from auxwave.parser import parse
from auxwave.residuals import report_from_values


def test_ei1_reference_value():
    assert abs(complex(ei1(1.0)) - 0.2193839344) < 1e-9


def test_ei1_on_the_cut_is_the_upper_limit():
    on_cut = complex(ei1(-1.0))
    assert on_cut.imag == pytest.approx(-math.pi)
    assert on_cut.real == pytest.approx(-special.expi(1.0))
    above = complex(ei1(-1.0 + 1e-12j))
    assert abs(above - on_cut) < 1e-9


def test_erf_symmetries():
    rng = np.random.default_rng(7)
    w = rng.normal(size=50) + 1j * rng.normal(size=50)
    np.testing.assert_allclose(erf(-w), -erf(w), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(erf(np.conj(w)), np.conj(erf(w)), rtol=1e-12, atol=1e-12)


def test_evaluate_scalars():
    assert evaluate(parse("erf(0) + exp(0)"), {}) == 1
    assert evaluate(parse("x^2 + I"), {"x": 3}) == 9 + 1j
    z = parse("exp(A*xi)/(int(-exp(A*xi), xi) + C1)")
    assert evaluate(z, {"A": 0.25, "C1": 1, "xi": 0}) == pytest.approx(1)


def test_evaluate_errors():
    with pytest.raises(UnboundSymbolError):
        evaluate(parse("a + 1"), {})
    with pytest.raises(PoleError):
        evaluate(parse("1/xi"), {"xi": 0})


def test_gaussian_quadrature():
    value = integrate(parse("exp(-xi^2)"), "xi", 0, 1)
    assert value == pytest.approx(math.sqrt(math.pi) / 2 * math.erf(1), rel=1e-12)


def test_quadrature_is_additive():
    f = parse("exp(sin(xi))*sin(xi) + A*cos(3*xi)")
    bindings = {"A": 0.7}
    whole = integrate(f, "xi", 0, 2.3, bindings)
    split = integrate(f, "xi", 0, 0.7, bindings) + integrate(f, "xi", 0.7, 2.3, bindings)
    assert abs(whole - split) <= 1e-9 * abs(whole)


def test_quadrature_gives_up():
    with pytest.raises(QuadratureError):
        integrate(parse("sin(50*xi)*exp(xi)"), "xi", 0, 10, quad=QuadratureSpec(max_subdivisions=1))


def test_derivative_of_integral_numerically():
    f = parse("exp(sin(xi))*cos(2*xi)")
    F = expression_function(integral(f, XI), "xi")
    rng = np.random.default_rng(3)
    for x in rng.uniform(-3, 3, size=20):
        assert abs(numeric_diff(F, x, 1) - evaluate(f, {"xi": x})) < 1e-6


def test_numeric_diff_orders():
    sin = expression_function(parse("sin(xi)"), "xi")
    exp = expression_function(parse("exp(xi)"), "xi")
    assert abs(numeric_diff(exp, 0.0, 1, h=1e-2) - 1) < 1e-8
    assert abs(numeric_diff(sin, 0.0, 3, h=1e-2) + 1) < 1e-6
    with pytest.raises(ValueError):
        numeric_diff(sin, 0.0, 4)


def test_stencil_touching_a_pole():
    f = expression_function(parse("1/xi"), "xi")
    with pytest.raises(StencilError):
        numeric_diff(f, 0.0, 2, h=1e-2)


def test_equal_numeric():
    grid = {"xi": np.linspace(-3, 3, 25)}
    assert equal_numeric(parse("sin(xi)^2 + cos(xi)^2"), parse("1"), grid)
    assert not equal_numeric(parse("sin(xi)"), parse("xi"), grid)


def test_sample_constant_curve():
    curve = sample_curve(parse("1"), "xi", (0, 1), 3)
    assert [(s.point, s.re, s.im) for s in curve.samples] == [
        (0.0, 1.0, 0.0),
        (0.5, 1.0, 0.0),
        (1.0, 1.0, 0.0),
    ]


def test_sample_sigmoid_is_monotone():
    curve = sample_curve(parse("1/(1 + exp(-xi))"), "xi", (-5, 5), 101)
    re = np.array([s.re for s in curve.samples])
    assert np.all(np.diff(re) > 0)
    assert np.all((re > 0) & (re < 1))
    assert realness(np.array([s.re + 1j * s.im for s in curve.samples]))


def test_sample_excludes_poles():
    curve = sample_curve(parse("1/xi"), "xi", (-1, 1), 21)
    assert 0.0 in curve.excluded
    assert len(curve.samples) == 20


def test_pole_free_interval():
    lo, hi = find_pole_free_interval(parse("1/xi"), "xi", {})
    assert hi - lo == pytest.approx(2)
    assert not lo <= 0 <= hi
    with pytest.raises(VerificationError):
        find_pole_free_interval(parse("1/sin(10*xi)"), "xi", {})


def test_report_needs_one_point():
    values = np.array([[1.0, 2.0], [-1.0, -2.0]])
    report = report_from_values(["a", "b"], values, [0.0, 1.0], {}, 1e-12)
    assert report.passed and report.max_abs == 0
    with pytest.raises(VerificationError):
        report_from_values(["a", "b"], values, [0.0, 1.0], {0: "x", 1: "y"}, 1e-12)


def test_report_gates_on_the_absolute_residual():
    values = np.array([[1e6, 1.0], [-1e6 + 1e-3, -1.0]])
    report = report_from_values(["a", "b"], values, [0.0, 1.0], {}, 1e-8)
    assert not report.passed
    assert report.max_abs == pytest.approx(1e-3, rel=1e-6)
    assert report.mean_abs == pytest.approx(5e-4, rel=1e-6)
    assert report.worst_point == 0.0
    assert report.max_scaled == pytest.approx(1e-9, rel=1e-6)
    assert report.max_abs >= report.mean_abs >= 0
