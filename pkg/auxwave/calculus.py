"""Symbolic differentiation."""

from __future__ import annotations

from fractions import Fraction

from auxwave.expr import (
    MINUS_ONE,
    ONE,
    PI,
    ZERO,
    Expr,
    FuncApp,
    IntegralRemainder,
    Power,
    Product,
    Sum,
    Symbol,
    add,
    apply,
    integral,
    mul,
    power,
    subs,
)


def _outer(f: FuncApp) -> Expr:
    """Derivative of the function with respect to its argument, at the argument."""
    u = f.arg
    if f.name == "exp":
        return f
    if f.name == "ln":
        return power(u, MINUS_ONE)
    if f.name == "sin":
        return apply("cos", u)
    if f.name == "cos":
        return mul(MINUS_ONE, apply("sin", u))
    if f.name == "erf":
        return mul(2, power(PI, Fraction(-1, 2)), apply("exp", mul(MINUS_ONE, power(u, 2))))
    # Ei1'(u) = -exp(-u)/u
    return mul(MINUS_ONE, apply("exp", mul(MINUS_ONE, u)), power(u, MINUS_ONE))


def differentiate(e: Expr, s: Symbol) -> Expr:
    """d e / d s, normalized.

    Integral nodes follow Leibniz' rule: the upper limit contributes
    ``f(upper) * upper'`` and a parameter inside the integrand contributes the
    integral of the partial derivative.
    """
    name = s.name
    memo: dict[Expr, Expr] = {}

    def d(node: Expr) -> Expr:
        if name not in node._free:
            return ZERO
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Symbol):
            out = ONE
        elif isinstance(node, Sum):
            out = add(*(d(t) for t in node.terms))
        elif isinstance(node, Product):
            fs = node.factors
            out = add(
                *(mul(*fs[:i], d(f), *fs[i + 1 :]) for i, f in enumerate(fs) if name in f._free)
            )
        elif isinstance(node, Power):
            base, exponent = node.base, node.exponent
            if name not in exponent._free:
                out = mul(exponent, power(base, add(exponent, MINUS_ONE)), d(base))
            else:
                out = mul(
                    node,
                    add(
                        mul(d(exponent), apply("ln", base)),
                        mul(exponent, d(base), power(base, MINUS_ONE)),
                    ),
                )
        elif isinstance(node, FuncApp):
            out = mul(_outer(node), d(node.arg))
        elif isinstance(node, IntegralRemainder):
            var = node.var
            at_upper = subs(node.integrand, {var.name: node.upper})
            out = mul(at_upper, d(node.upper))
            if var.name != name:
                out = add(out, integral(differentiate(node.integrand, s), var, node.upper))
        else:
            out = ZERO
        memo[node] = out
        return out

    return d(e)


def nth_derivative(e: Expr, s: Symbol, order: int) -> Expr:
    for _ in range(order):
        e = differentiate(e, s)
    return e
