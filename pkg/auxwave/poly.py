"""Polynomial collection in a distinguished symbol."""

from __future__ import annotations

from dataclasses import dataclass

from auxwave.exceptions import NotPolynomialError
from auxwave.expr import (
    ZERO,
    Expr,
    Power,
    RationalConst,
    Symbol,
    add,
    expand,
    factors_of,
    mul,
    power,
    terms_of,
)


@dataclass(frozen=True)
class PolyInZ:
    """Coefficients c_0..c_d of an expression viewed as a polynomial in ``symbol``."""

    symbol: Symbol
    coefficients: tuple[Expr, ...]

    def __post_init__(self):
        if self.coefficients and self.coefficients[-1] == ZERO:
            raise NotPolynomialError("leading coefficient must not be zero")
        for c in self.coefficients:
            if self.symbol.name in c.free_symbols:
                raise NotPolynomialError(f"coefficient still contains {self.symbol.name}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, i: int) -> Expr:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else ZERO

    def padded(self, degree: int) -> tuple[Expr, ...]:
        return tuple(self.coefficient(i) for i in range(max(degree, self.degree) + 1))

    def reconstruct(self) -> Expr:
        terms = (mul(c, power(self.symbol, i)) for i, c in enumerate(self.coefficients))
        return expand(add(*terms))


def monomial_degree(term: Expr, z: Symbol) -> tuple[int, Expr]:
    """Split an expanded term into (power of z, z-free cofactor)."""
    name = z.name
    if name not in term.free_symbols:
        return 0, term
    degree = 0
    rest = []
    for f in factors_of(term):
        if f == z:
            degree += 1
        elif (
            isinstance(f, Power)
            and f.base == z
            and isinstance(f.exponent, RationalConst)
            and f.exponent.value.denominator == 1
            and f.exponent.value > 0
        ):
            degree += int(f.exponent.value)
        elif name in f.free_symbols:
            raise NotPolynomialError(f"{name} occurs in non-polynomial position: {f}")
        else:
            rest.append(f)
    return degree, mul(*rest)


def poly_collect(e: Expr, z: Symbol) -> PolyInZ:
    buckets: dict[int, list[Expr]] = {}
    for term in terms_of(expand(e)):
        degree, cofactor = monomial_degree(term, z)
        buckets.setdefault(degree, []).append(cofactor)
    top = max(buckets, default=-1)
    coefficients = [add(*buckets.get(i, ())) for i in range(top + 1)]
    while coefficients and coefficients[-1] == ZERO:
        coefficients.pop()
    return PolyInZ(z, tuple(coefficients))
