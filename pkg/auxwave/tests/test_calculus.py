import numpy as np
import pytest

from auxwave.calculus import differentiate, nth_derivative
from auxwave.expr import XI, ZERO, Symbol, add, expand, integral, mul
from auxwave.numeric import equal_numeric
from auxwave.parser import parse
from auxwave.tests.generators import complex_samples, random_constant, random_expr

GRID = np.linspace(-1.5, 1.5, 31)


def test_polynomial_rules():
    assert expand(differentiate(parse("x^3 + 2*x"), Symbol("x"))) == parse("3*x^2 + 2")
    assert differentiate(parse("A*B"), XI) == ZERO


def test_elementary_functions():
    cases = {
        "sin(2*xi)": "2*cos(2*xi)",
        "exp(xi^2)": "2*xi*exp(xi^2)",
        "ln(1 + xi^2)": "2*xi/(1 + xi^2)",
        "erf(xi)": "2*exp(-xi^2)/pi^(1/2)",
        "(2 + xi)^(1/2)": "(1/2)*(2 + xi)^(-1/2)",
    }
    for f, df in cases.items():
        assert equal_numeric(differentiate(parse(f), XI), parse(df), {"xi": GRID})


def test_ei1_derivative_on_the_cut():
    # -exp(xi) stays on the negative real axis; the derivative is branch free.
    f = parse("Ei1(-exp(xi))")
    assert equal_numeric(differentiate(f, XI), parse("-exp(exp(xi))"), {"xi": GRID})


def test_derivative_of_integral_is_integrand():
    f = parse("exp(sin(xi))*cos(3*xi)")
    assert differentiate(integral(f, XI), XI) == f


def test_leibniz_with_parameter():
    F = parse("int(exp(A*t), t, xi)")
    dA = differentiate(F, Symbol("A"))
    expected = parse("int(t*exp(A*t), t, xi)")
    assert equal_numeric(dA, expected, {"xi": GRID, "A": 0.5})


def test_nth_derivative():
    assert equal_numeric(nth_derivative(parse("sin(xi)"), XI, 3), parse("-cos(xi)"), {"xi": GRID})


@pytest.mark.parametrize("seed", range(20))
def test_derivative_is_linear(seed):
    rng = np.random.default_rng(seed)
    f, g = random_expr(rng), random_expr(rng)
    a, b = random_constant(rng), random_constant(rng)
    lhs = differentiate(add(mul(a, f), mul(b, g)), XI)
    rhs = add(mul(a, differentiate(f, XI)), mul(b, differentiate(g, XI)))
    assert equal_numeric(lhs, rhs, complex_samples(rng))


@pytest.mark.parametrize("seed", range(20))
def test_product_rule(seed):
    rng = np.random.default_rng(seed)
    f, g = random_expr(rng), random_expr(rng)
    lhs = differentiate(mul(f, g), XI)
    rhs = add(mul(differentiate(f, XI), g), mul(f, differentiate(g, XI)))
    assert equal_numeric(lhs, rhs, complex_samples(rng), tol=1e-10)
