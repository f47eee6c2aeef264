from fractions import Fraction

import numpy as np
import pytest

from auxwave.exceptions import ParseError, UnknownFunctionError
from auxwave.expr import XI, RationalConst, Symbol, add, exp, integral, mul, power
from auxwave.parser import parse, render, tokenize
from auxwave.tests.generators import random_expr

CATALOG_LIKE = [
    "A/(-B + exp(-A*xi)*C1*A)",
    "exp(A*sin(xi))/(int(-exp(A*sin(xi))*B*sin(xi), xi) + C1)",
    "(-2*C)^(1/2)*exp((1/2)*C*xi^2 + B*xi)",
    "C*exp(exp(C*xi)/C)/(Ei1(-exp(C*xi)/C)*A + C1*C)",
    "erf((C*xi + B + I)/(-2*C)^(1/2))*pi^(1/2)",
    "int(exp(t), t, 2*xi) - ln(xi)",
]


def test_precedence():
    assert parse("1 + 2*3") == RationalConst(7)
    assert parse("2^3^2") == RationalConst(512)
    assert parse("-2^2") == RationalConst(-4)
    assert parse("x - y - z") == add(Symbol("x"), mul(-1, Symbol("y")), mul(-1, Symbol("z")))


def test_decimal_literals_are_exact():
    assert parse("0.1") == RationalConst(Fraction(1, 10))
    assert parse("1e-3*x") == mul(Fraction(1, 1000), Symbol("x"))


def test_calls_and_integrals():
    assert parse("exp(xi)") == exp(XI)
    assert parse("int(exp(xi^2), xi)") == integral(exp(power(XI, 2)), XI)
    assert parse("int(exp(xi^2), xi, 1)") == integral(exp(power(XI, 2)), XI, 1)


def test_token_positions():
    tokens = tokenize("a +  bc")
    assert [(t.text, t.pos) for t in tokens[:-1]] == [("a", 0), ("+", 2), ("bc", 5)]


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("1 + * 2")
    assert info.value.position == 4


@pytest.mark.parametrize("text", ["", "(1 + 2", "1 2", "x $ y", "exp", "int(x, 2)"])
def test_malformed(text):
    with pytest.raises(ParseError):
        parse(text)


def test_unknown_function():
    with pytest.raises(UnknownFunctionError) as info:
        parse("tanh(xi)")
    assert info.value.name == "tanh"


@pytest.mark.parametrize("text", CATALOG_LIKE)
def test_render_round_trip(text):
    e = parse(text)
    assert parse(render(e)) == e


@pytest.mark.parametrize("seed", range(30))
def test_random_trees_round_trip(seed):
    e = random_expr(np.random.default_rng(seed), inverses=True)
    assert parse(render(e)) == e
