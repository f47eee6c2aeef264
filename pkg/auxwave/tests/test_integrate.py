import numpy as np
import pytest

from auxwave.calculus import differentiate
from auxwave.expr import XI, has_integral
from auxwave.integrate import antiderivative, closed_antiderivative
from auxwave.numeric import equal_numeric
from auxwave.parser import parse

GRID = np.linspace(-1.2, 1.2, 25)

CLOSED = [
    "xi^2*exp(2*xi + 1)",
    "exp(-xi^2 + xi)",
    "exp(exp(xi))",
    "exp(exp(2*xi) + 2*xi)",
    "sin(3*xi)",
    "cos(xi)*exp(xi)",
    "xi*sin(xi)",
    "(xi + 1)^2*exp(-xi)",
]


def test_polynomial():
    assert closed_antiderivative(parse("3*xi^2 + 2"), XI) == parse("xi^3 + 2*xi")


@pytest.mark.parametrize("text", CLOSED)
def test_closed_forms_differentiate_back(text):
    f = parse(text)
    F = closed_antiderivative(f, XI)
    assert F is not None
    assert not has_integral(F)
    assert equal_numeric(differentiate(F, XI), f, {"xi": GRID})


@pytest.mark.parametrize("a", [-1.0, 1.0])
def test_gaussian_with_parameter(a):
    f = parse("exp(A*xi^2)")
    F = closed_antiderivative(f, XI)
    assert "erf" in str(F)
    assert equal_numeric(differentiate(F, XI), f, {"xi": GRID, "A": a})


def test_unmatched_terms_stay_integrals():
    f = parse("exp(xi^3) + 2*xi")
    assert closed_antiderivative(f, XI) is None
    F = antiderivative(f, XI)
    assert has_integral(F)
    assert equal_numeric(differentiate(F, XI), f, {"xi": GRID})
