"""Seeded random expression trees for the kernel tests."""

from fractions import Fraction

import numpy as np

from auxwave.expr import XI, Expr, RationalConst, Symbol, add, apply, const, mul, power

A = Symbol("A")
Z = Symbol("z")


def random_constant(rng: np.random.Generator) -> RationalConst:
    numerator = int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return const(Fraction(numerator, int(rng.integers(1, 4))))


def random_expr(rng: np.random.Generator, depth: int = 3, inverses: bool = False) -> Expr:
    """A tree over ``xi``, ``A`` and small rationals built with the smart constructors."""
    if depth == 0 or rng.random() < 0.2:
        return (XI, A, random_constant(rng))[int(rng.integers(3))]
    a = random_expr(rng, depth - 1, inverses)
    kind = int(rng.integers(6 if inverses else 5))
    if kind == 0:
        return add(a, random_expr(rng, depth - 1, inverses))
    if kind == 1:
        return mul(a, random_expr(rng, depth - 1, inverses))
    if kind == 2:
        return power(a, int(rng.choice([2, 3])))
    if kind == 3:
        return apply(str(rng.choice(["sin", "cos"])), a)
    if kind == 4:
        return apply("exp", mul(Fraction(1, 2), a))
    if isinstance(a, RationalConst):
        return a
    return power(a, -1)


def complex_samples(rng: np.random.Generator, count: int = 20) -> dict[str, object]:
    xi = rng.uniform(-1, 1, count) + 1j * rng.uniform(-0.5, 0.5, count)
    return {"xi": xi, "A": complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))}
