"""
Bernoulli auxiliary equations ``z' = P(xi) z + Q(xi) z^n``.

With ``w = z^(1-n)`` the equation becomes linear, ``w' = (1-n) (P w + Q)``,
which ``solve_general`` integrates with the rule table of
:mod:`auxwave.integrate`. ``classical_solution`` gives the constant-coefficient
pair of solutions and ``verify_aux`` checks any candidate numerically.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Literal

import numpy as np

from auxwave.calculus import differentiate
from auxwave.exceptions import AuxwaveError, ConfigError, ExpressionError
from auxwave.expr import (
    MINUS_ONE,
    ONE,
    XI,
    Expr,
    RationalConst,
    Symbol,
    add,
    exp,
    has_integral,
    mul,
    neg,
    power,
    subs,
    to_expr,
)
from auxwave.integrate import antiderivative
from auxwave.numeric import DEFAULT_QUADRATURE, QuadratureSpec, evaluate, grid_derivative
from auxwave.parser import parse
from auxwave.residuals import ResidualReport, residual_on_grid

logger = logging.getLogger(__name__)

Z = Symbol("z")


@dataclass(frozen=True)
class AuxEquation:
    P: Expr
    Q: Expr
    n: int = 2

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ExpressionError(f"Bernoulli exponent must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "P", to_expr(self.P))
        object.__setattr__(self, "Q", to_expr(self.Q))
        for label, e in (("P", self.P), ("Q", self.Q)):
            if Z.name in e.free_symbols:
                raise ExpressionError(f"{label} must not depend on z")

    @classmethod
    def from_text(cls, P: str, Q: str, n: int = 2) -> AuxEquation:
        return cls(parse(P), parse(Q), n)

    def rhs(self, z: Expr) -> Expr:
        return add(mul(self.P, z), mul(self.Q, power(z, self.n)))

    def bind(self, params: Mapping[str, object]) -> AuxEquation:
        return AuxEquation(subs(self.P, params), subs(self.Q, params), self.n)

    @property
    def parameters(self) -> frozenset[str]:
        return (self.P.free_symbols | self.Q.free_symbols) - {XI.name}

    def __str__(self):
        return f"z' = ({self.P})*z + ({self.Q})*z^{self.n}"


@dataclass(frozen=True)
class AuxSolution:
    """A solution ``z(xi)`` carrying the integration constant ``constant``."""

    z: Expr
    form: Literal["closed", "quadrature"] = "closed"
    notes: str = ""
    constant: str | None = "C1"

    def __post_init__(self):
        if self.form not in ("closed", "quadrature"):
            raise ExpressionError(f"unknown solution form {self.form!r}")
        if self.constant is not None and self.constant not in self.z.free_symbols:
            raise ExpressionError(f"solution does not contain the constant {self.constant}")

    def bind(self, params: Mapping[str, object]) -> Expr:
        return subs(self.z, params)


@dataclass(frozen=True)
class ClassicalBernoulli:
    """``z' = a z + b z^k`` with constant ``a``, ``b``."""

    a: Expr
    b: Expr
    k: int = 2
    xi0: Expr = RationalConst(0)

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise ExpressionError(f"k must be an integer >= 2, got {self.k!r}")
        for label in ("a", "b", "xi0"):
            object.__setattr__(self, label, to_expr(getattr(self, label)))
        for label in ("a", "b"):
            if getattr(self, label) == RationalConst(0):
                raise ExpressionError(f"{label} must be nonzero")

    def equation(self) -> AuxEquation:
        return AuxEquation(self.a, self.b, self.k)


def integrating_factor(eq: AuxEquation) -> Expr:
    """``exp`` of an antiderivative of ``P``, so that ``mu' = P mu``."""
    return exp(antiderivative(eq.P, XI))


def solve_general(eq: AuxEquation, constant: str = "C1") -> AuxSolution:
    m = 1 - eq.n
    mu = integrating_factor(eq)
    inner = antiderivative(mul(m, eq.Q, power(mu, -m)), XI)
    w = mul(power(mu, m), add(Symbol(constant), inner))
    z = power(w, Fraction(1, m))
    form = "quadrature" if has_integral(z) else "closed"
    notes = "" if eq.n == 2 else f"principal branch of the {-m}-th root"
    logger.debug("solve_general(%s) -> %s [%s]", eq, z, form)
    return AuxSolution(z, form, notes, constant)


def classical_solution(cb: ClassicalBernoulli, branch: Literal["I", "II"] = "I") -> Expr:
    if branch not in ("I", "II"):
        raise ExpressionError(f"unknown branch {branch!r}")
    E = exp(mul(cb.a, cb.k - 1, add(XI, cb.xi0)))
    numerator = mul(cb.a, E) if branch == "I" else mul(MINUS_ONE, cb.a, E)
    ratio = mul(numerator, power(add(ONE, neg(mul(cb.b, E))), MINUS_ONE))
    return power(ratio, Fraction(1, cb.k - 1))


def residual_terms(
    eq: AuxEquation, z: Expr, dz: Expr | np.ndarray
) -> dict[str, Expr | np.ndarray]:
    return {
        "dz/dxi": dz,
        "-P*z": neg(mul(eq.P, z)),
        f"-Q*z^{eq.n}": neg(mul(eq.Q, power(z, eq.n))),
    }


def verify_aux(
    eq: AuxEquation,
    sol: AuxSolution | Expr,
    params: Mapping[str, object],
    interval: tuple[float, float],
    npoints: int,
    tol: float,
    derivative: Literal["symbolic", "numeric"] | None = None,
    threshold: float = 1e-6,
    quad: QuadratureSpec | None = None,
) -> ResidualReport:
    """Residual of ``z' - P z - Q z^n`` on a uniform grid over ``interval``.

    ``z'`` is symbolic for closed forms and a central difference when ``z`` holds
    integral nodes, unless ``derivative`` forces one of the two.
    """
    z = sol.z if isinstance(sol, AuxSolution) else sol
    z = subs(z, params)
    bound = eq.bind(params)
    unbound = (z.free_symbols | bound.P.free_symbols | bound.Q.free_symbols) - {XI.name}
    if unbound:
        raise ConfigError(f"parameters not bound: {', '.join(sorted(unbound))}")
    grid = np.linspace(interval[0], interval[1], npoints)
    if derivative is None:
        derivative = "numeric" if has_integral(z) else "symbolic"
    if derivative == "symbolic":
        dz: Expr | np.ndarray = differentiate(z, XI)
    elif derivative == "numeric":
        quad = _stencil_quadrature(quad)
        dz = grid_derivative(z, XI.name, grid, quad=quad)
    else:
        raise ConfigError(f"unknown derivative mode {derivative!r}")
    terms = residual_terms(bound, z, dz)
    return residual_on_grid(terms, XI, grid, {}, tol, threshold, watch=(z,), quad=quad)


def _stencil_quadrature(quad: QuadratureSpec | None) -> QuadratureSpec:
    # stencil noise is divided by the step
    base = quad or DEFAULT_QUADRATURE
    return replace(base, rel_tol=min(base.rel_tol, 1e-12))


@dataclass(frozen=True)
class SweepRow:
    a: float
    b: float
    k: int
    branch: str
    sign_condition: bool
    max_abs: float | None
    passed: bool
    excluded: int
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def classical_sweep(
    values: tuple[float, ...] = (-1.0, 1.0),
    ks: tuple[int, ...] = (2, 3),
    interval: tuple[float, float] = (-5.0, 5.0),
    npoints: int = 101,
    tol: float = 1e-9,
) -> list[SweepRow]:
    """Residuals of both classical branches over a grid of (a, b, k).

    ``sign_condition`` records whether (a, b) falls under the sign condition
    usually attached to the branch (I: a < 0 < b, II: b < 0 < a); it is
    reported next to the residual, never enforced.
    """
    rows = []
    for k in ks:
        for a in values:
            for b in values:
                cb = ClassicalBernoulli(to_expr(a), to_expr(b), k)
                for branch in ("I", "II"):
                    condition = (a < 0 < b) if branch == "I" else (b < 0 < a)
                    z = classical_solution(cb, branch)
                    try:
                        report = verify_aux(cb.equation(), z, {}, interval, npoints, tol)
                    except AuxwaveError as err:
                        row = SweepRow(a, b, k, branch, condition, None, False, npoints, str(err))
                        rows.append(row)
                        continue
                    rows.append(
                        SweepRow(
                            a, b, k, branch, condition, report.max_abs, report.passed,
                            len(report.excluded_points),
                        )
                    )
    return rows


def value_at(sol: AuxSolution | Expr, params: Mapping[str, object], xi: complex) -> complex:
    z = sol.z if isinstance(sol, AuxSolution) else sol
    return evaluate(z, {**params, XI.name: xi})
