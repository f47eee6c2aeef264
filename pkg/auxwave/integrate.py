"""
Rule-table antiderivatives.

``antiderivative`` expands its argument and integrates term by term. A term is
split into an x-free coefficient, at most one ``exp`` factor, at most one
``sin``/``cos`` factor and a power of x. The closed forms known here:

* polynomials,
* ``x^n * exp(alpha*x + beta)`` by repeated integration by parts,
* ``exp(a*x^2 + b*x + c)`` through ``erf``,
* ``exp(kappa*exp(gamma*x) + beta)`` through ``Ei1`` and
  ``exp(kappa*exp(gamma*x) + gamma*x + beta)`` in closed form,
* ``sin``/``cos`` of a linear argument, alone or times one of the exponential
  forms above (rewritten through ``exp(+-I*v)``).

Whatever is left is returned as one IntegralRemainder from 0, so the result is
always an antiderivative up to an additive constant.
"""

from __future__ import annotations

import logging
from math import factorial

from auxwave.exceptions import NotPolynomialError
from auxwave.expr import (
    HALF,
    I,
    MINUS_ONE,
    PI,
    ZERO,
    Expr,
    FuncApp,
    Power,
    Symbol,
    add,
    apply,
    exp,
    expand,
    factors_of,
    integral,
    is_exp,
    is_integer,
    mul,
    neg,
    power,
    sqrt,
    terms_of,
)
from auxwave.poly import poly_collect

logger = logging.getLogger(__name__)


def antiderivative(f: Expr, x: Symbol) -> Expr:
    closed, remainder = _split(f, x)
    if remainder:
        logger.debug("no closed form for %d term(s); keeping an integral", len(remainder))
    return add(*closed, integral(add(*remainder), x))


def closed_antiderivative(f: Expr, x: Symbol) -> Expr | None:
    """Closed-form antiderivative, or None if any term is outside the table."""
    closed, remainder = _split(f, x)
    return None if remainder else add(*closed)


def _split(f: Expr, x: Symbol) -> tuple[list[Expr], list[Expr]]:
    closed, remainder = [], []
    for term in terms_of(expand(f)):
        result = _term(term, x)
        if result is None:
            remainder.append(term)
        else:
            closed.append(result)
    return closed, remainder


def _linear(e: Expr, x: Symbol) -> tuple[Expr, Expr] | None:
    """(slope, intercept) if ``e`` has degree at most 1 in x."""
    try:
        poly = poly_collect(e, x)
    except NotPolynomialError:
        return None
    if poly.degree > 1:
        return None
    return poly.coefficient(1), poly.coefficient(0)


def _positive_power_of(f: Expr, x: Symbol) -> bool:
    return (
        isinstance(f, Power) and f.base == x and is_integer(f.exponent) and f.exponent.value > 0
    )


def _term(term: Expr, x: Symbol) -> Expr | None:
    name = x.name
    if name not in term.free_symbols:
        return mul(term, x)
    coefficient: list[Expr] = []
    exps: list[FuncApp] = []
    trigs: list[FuncApp] = []
    degree = 0
    for f in factors_of(term):
        if name not in f.free_symbols:
            coefficient.append(f)
        elif f == x:
            degree += 1
        elif _positive_power_of(f, x):
            degree += int(f.exponent.value)
        elif is_exp(f):
            exps.append(f)
        elif isinstance(f, FuncApp) and f.name in ("sin", "cos"):
            trigs.append(f)
        else:
            return None
    k = mul(*coefficient)

    if trigs:
        if len(trigs) > 1:
            return None
        return _trig(k, degree, exps, trigs[0], x)
    if not exps:
        return mul(k, power(x, degree + 1), power(degree + 1, MINUS_ONE))
    return _exponential(k, degree, exps[0], x)


def _trig(k: Expr, degree: int, exps: list[FuncApp], trig: FuncApp, x: Symbol) -> Expr | None:
    line = _linear(trig.arg, x)
    if line is None or line[0] == ZERO:
        return None
    alpha, _ = line
    v = trig.arg
    if not exps and degree == 0:
        if trig.name == "sin":
            return mul(MINUS_ONE, k, apply("cos", v), power(alpha, MINUS_ONE))
        return mul(k, apply("sin", v), power(alpha, MINUS_ONE))
    plus, minus = exp(mul(I, v)), exp(mul(MINUS_ONE, I, v))
    if trig.name == "cos":
        rewritten = add(mul(HALF, plus), mul(HALF, minus))
    else:
        rewritten = add(mul(-HALF, I, plus), mul(HALF, I, minus))
    return closed_antiderivative(mul(k, power(x, degree), *exps, rewritten), x)


def _exponential(k: Expr, degree: int, e: FuncApp, x: Symbol) -> Expr | None:
    try:
        poly = poly_collect(e.arg, x)
    except NotPolynomialError:
        return _exp_of_exp(k, degree, e.arg, x)
    if poly.degree == 1:
        alpha = poly.coefficient(1)
        # integration by parts, n times
        series = add(
            *(
                mul(
                    (-1) ** j * (factorial(degree) // factorial(degree - j)),
                    power(x, degree - j),
                    power(alpha, -(j + 1)),
                )
                for j in range(degree + 1)
            )
        )
        return mul(k, e, series)
    if poly.degree == 2 and degree == 0:
        c, b, a = poly.coefficients
        r = sqrt(mul(-4, a))
        shift = add(c, neg(mul(power(b, 2), power(mul(4, a), MINUS_ONE))))
        argument = mul(add(mul(2, a, x), b), power(r, MINUS_ONE))
        return mul(MINUS_ONE, k, sqrt(PI), exp(shift), apply("erf", argument), power(r, MINUS_ONE))
    return None


def _exp_of_exp(k: Expr, degree: int, arg: Expr, x: Symbol) -> Expr | None:
    if degree != 0:
        return None
    name = x.name
    inner, rest = [], []
    for t in terms_of(arg):
        if any(is_exp(f) and name in f.free_symbols for f in factors_of(t)):
            inner.append(t)
        else:
            rest.append(t)
    if len(inner) != 1:
        return None
    w = inner[0]
    exp_factors = [f for f in factors_of(w) if is_exp(f)]
    others = [f for f in factors_of(w) if not is_exp(f)]
    if len(exp_factors) != 1 or any(name in f.free_symbols for f in others):
        return None
    gamma_line = _linear(exp_factors[0].arg, x)
    rest_line = _linear(add(*rest), x)
    if gamma_line is None or rest_line is None or gamma_line[0] == ZERO:
        return None
    gamma = gamma_line[0]
    slope, beta = rest_line
    if slope == ZERO:
        # substitution s = w turns the integrand into exp(s)/(gamma*s)
        return mul(MINUS_ONE, k, exp(beta), apply("Ei1", neg(w)), power(gamma, MINUS_ONE))
    if slope == gamma:
        scale = mul(w, exp(mul(MINUS_ONE, gamma, x)))
        return mul(k, exp(add(w, beta)), power(mul(gamma, scale), MINUS_ONE))
    return None
