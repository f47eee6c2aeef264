"""
Travelling-wave reduction and the auxiliary-equation method.

A PDE is written over field symbols ``u``, ``u_x``, ``u_xt``, ``u_xxx``, ... (one
``x`` or ``t`` per derivative). Under ``xi = mu*(x - c*t)`` the field
``u_{x^i t^j}`` becomes ``mu^i (-c mu)^j U_{i+j}`` where ``U_m`` is the m-th
derivative of the profile ``U(xi)``.

``derive_system`` substitutes ``U = sum g_i z^i``, replaces every ``z'`` by the
auxiliary right-hand side and returns the coefficients of the powers of ``z``.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from auxwave.bernoulli import AuxEquation, AuxSolution
from auxwave.calculus import differentiate
from auxwave.exceptions import (
    ExpressionError,
    NoBalanceError,
    NotPolynomialError,
    ReductionError,
    UnboundCoefficientError,
)
from auxwave.expr import (
    MINUS_ONE,
    XI,
    ZERO,
    Expr,
    Power,
    Symbol,
    add,
    expand,
    factors_of,
    is_integer,
    mul,
    power,
    subs,
    terms_of,
    to_expr,
)
from auxwave.numeric import Evaluator, QuadratureSpec, evaluate, pole_scan
from auxwave.parser import parse
from auxwave.poly import poly_collect
from auxwave.residuals import ResidualReport, report_from_values, residual_on_grid

logger = logging.getLogger(__name__)

Z = Symbol("z")
C = Symbol("c")
MU = Symbol("mu")
X = Symbol("x")
T = Symbol("t")

B_EQUATION = "u_t - u_xxt + (b + 1)*u*u_x - b*u_x*u_xx - u*u_xxx"
PRINTED_EQ8 = "c*U_1 - mu^3*U_3 - mu*U*U_1 + 2*mu^3*U_1*U_2 - mu^3*U*U_3"

ReductionMode = Literal["mechanical", "paper-eq8"]

_FIELD = re.compile(r"u(?:_(x*)(t*))?\Z")
_PROFILE = re.compile(r"U(?:_([1-9][0-9]*))?\Z")


def field_orders(name: str) -> tuple[int, int] | None:
    """(x order, t order) of a field symbol such as ``u_xxt``; None otherwise."""
    m = _FIELD.match(name)
    if m is None or name == "u_":
        return None
    return len(m.group(1) or ""), len(m.group(2) or "")


def field_symbol(i: int, j: int) -> Symbol:
    return Symbol("u" if i == j == 0 else f"u_{'x' * i}{'t' * j}")


def profile_order(name: str) -> int | None:
    m = _PROFILE.match(name)
    if m is None:
        return None
    return int(m.group(1) or 0)


def profile_symbol(m: int) -> Symbol:
    return Symbol("U" if m == 0 else f"U_{m}")


@dataclass(frozen=True, eq=False)
class PDEProblem:
    expression: Expr
    parameters: Mapping[str, Expr] = field(default_factory=dict)
    name: str = "pde"

    def __post_init__(self):
        for s in self.expression.free_symbols:
            if s in (X.name, T.name):
                raise ExpressionError(f"'{s}' may only appear through field symbols")
            if s.startswith("u_") and field_orders(s) is None:
                raise ExpressionError(f"'{s}' is not a pure x/t derivative of u")
        object.__setattr__(
            self, "parameters", {k: to_expr(v) for k, v in self.parameters.items()}
        )

    @property
    def fields(self) -> dict[str, tuple[int, int]]:
        found = {s: field_orders(s) for s in self.expression.free_symbols}
        return {s: o for s, o in found.items() if o is not None}

    def bound(self) -> Expr:
        return expand(subs(self.expression, self.parameters))

    def __str__(self):
        return str(self.expression)


def b_equation(b=None) -> PDEProblem:
    """The b-family ``u_t - u_xxt + (b+1) u u_x - b u_x u_xx - u u_xxx``.

    ``b=None`` keeps ``b`` symbolic.
    """
    params = {} if b is None else {"b": to_expr(b)}
    return PDEProblem(parse(B_EQUATION), params, name="b-equation")


@dataclass(frozen=True, eq=False)
class TravellingODE:
    expression: Expr
    mode: str = "given"

    def __post_init__(self):
        for s in self.expression.free_symbols:
            if s in (X.name, T.name) or field_orders(s) is not None:
                raise ExpressionError(f"travelling ODE must not contain '{s}'")

    @classmethod
    def from_text(cls, text: str, mode: str = "given") -> TravellingODE:
        return cls(parse(text), mode)

    @property
    def max_order(self) -> int:
        orders = [profile_order(s) for s in self.expression.free_symbols]
        return max((o for o in orders if o is not None), default=0)

    def __str__(self):
        return str(self.expression)


def reduce_travelling(p: PDEProblem, mode: ReductionMode = "mechanical") -> TravellingODE:
    if mode == "mechanical":
        table = {
            name: mul(power(MU, i), power(mul(MINUS_ONE, C, MU), j), profile_symbol(i + j))
            for name, (i, j) in p.fields.items()
        }
        ode = TravellingODE(expand(subs(p.bound(), table)), "mechanical")
        logger.info("mechanical reduction: %s", ode)
        return ode
    if mode == "paper-eq8":
        reference = b_equation(-2).bound()
        if expand(add(p.bound(), mul(MINUS_ONE, reference))) != ZERO:
            raise ReductionError("the printed reduction exists only for the b-equation with b = -2")
        return TravellingODE(parse(PRINTED_EQ8), "paper-eq8")
    raise ReductionError(f"unknown reduction mode {mode!r}")


def _profile_powers(term: Expr) -> list[tuple[int, int]]:
    """(derivative order, power) for every profile factor of a term."""
    out = []
    for f in factors_of(term):
        base, exponent = (f.base, f.exponent) if isinstance(f, Power) else (f, None)
        order = profile_order(base.name) if isinstance(base, Symbol) else None
        if order is None:
            if any(profile_order(s) is not None for s in f.free_symbols):
                raise NotPolynomialError(f"term {term} is not a product of profile derivatives")
            continue
        if exponent is None:
            out.append((order, 1))
        elif is_integer(exponent) and exponent.value > 0:
            out.append((order, int(exponent.value)))
        else:
            raise NotPolynomialError(f"non-integer power of {base} in {term}")
    return out


def _degree(powers: list[tuple[int, int]], order: int, n: int) -> int:
    return sum(p * (order + m * (n - 1)) for m, p in powers)


@dataclass(frozen=True)
class BalanceResult:
    """Chosen order, all positive candidates and the (alpha, beta) of each term.

    A term of ``alpha`` profile factors has z-degree ``alpha*N + beta``.
    """

    order: int
    candidates: tuple[int, ...]
    degrees: tuple[tuple[int, int], ...]


def balance(ode: TravellingODE, override: int | None = None, n: int = 2) -> BalanceResult:
    """Smallest positive N at which two terms of different nonlinearity tie."""
    degrees = set()
    for term in terms_of(expand(ode.expression)):
        powers = _profile_powers(term)
        alpha = sum(p for _, p in powers)
        if alpha:
            degrees.add((alpha, sum(m * (n - 1) * p for m, p in powers)))
    ordered = sorted(degrees)
    candidates = set()
    for ai, bi in ordered:
        for aj, bj in ordered:
            if ai > aj and (bj - bi) % (ai - aj) == 0:
                N = (bj - bi) // (ai - aj)
                if N > 0:
                    candidates.add(N)
    found = tuple(sorted(candidates))
    if override is not None:
        if not isinstance(override, int) or override < 1:
            raise NoBalanceError(f"order override must be a positive integer, got {override!r}")
        return BalanceResult(override, found, tuple(ordered))
    if not found:
        raise NoBalanceError(f"no pair of terms of {ode} balances at a positive order")
    logger.info("balance: candidates %s, N = %d", found, found[0])
    return BalanceResult(found[0], found, tuple(ordered))


@dataclass(frozen=True)
class Ansatz:
    order: int

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ExpressionError(f"ansatz order must be a positive integer, got {self.order!r}")

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(Symbol(f"g{i}") for i in range(self.order + 1))

    def series(self, z: Expr = Z) -> Expr:
        return add(*(mul(g, power(z, i)) for i, g in enumerate(self.symbols)))


@dataclass(frozen=True, eq=False)
class CoeffSystem:
    """Coefficients of ``z^0 .. z^d`` of the substituted ODE, each set to zero."""

    equations: tuple[Expr, ...]
    unknowns: tuple[str, ...]
    parameters: tuple[str, ...]
    aux: AuxEquation
    ode_mode: str
    order: int
    aux_case: str | None = None

    @property
    def depends_on_xi(self) -> bool:
        return any(XI.name in e.free_symbols for e in self.equations)

    def bind(self, params: Mapping[str, object]) -> CoeffSystem:
        equations = tuple(subs(e, params) for e in self.equations)
        return CoeffSystem(
            equations,
            self.unknowns,
            tuple(p for p in self.parameters if p not in params),
            self.aux.bind(params),
            self.ode_mode,
            self.order,
            self.aux_case,
        )

    def reconstruct(self, z: Expr = Z) -> Expr:
        return add(*(mul(e, power(z, i)) for i, e in enumerate(self.equations)))

    def sidecar(self) -> dict:
        return {
            "unknowns": list(self.unknowns),
            "parameters": list(self.parameters),
            "aux_case": self.aux_case,
            "ode_mode": self.ode_mode,
        }


def lifted_derivatives(series: Expr, aux: AuxEquation, count: int) -> list[Expr]:
    """``U, U', ..., U^(count)`` with every ``z'`` replaced by the auxiliary right side."""
    rhs = aux.rhs(Z)
    out = [expand(series)]
    for _ in range(count):
        prev = out[-1]
        out.append(expand(add(differentiate(prev, XI), mul(differentiate(prev, Z), rhs))))
    return out


def derive_system(
    ode: TravellingODE, ansatz: Ansatz, aux: AuxEquation, aux_case: str | None = None
) -> CoeffSystem:
    derivs = lifted_derivatives(ansatz.series(), aux, ode.max_order)
    table = {profile_symbol(m).name: d for m, d in enumerate(derivs)}
    collected = poly_collect(subs(ode.expression, table), Z)
    ode_terms = terms_of(expand(ode.expression))
    nominal = max((_degree(_profile_powers(t), ansatz.order, aux.n) for t in ode_terms), default=0)
    equations = collected.padded(nominal)
    names = [g.name for g in ansatz.symbols]
    if C.name in ode.expression.free_symbols:
        names.append(C.name)
    free = set().union(*(e.free_symbols for e in equations), aux.parameters)
    free.update(s for s in ode.expression.free_symbols if profile_order(s) is None)
    parameters = tuple(sorted(free - set(names) - {XI.name}))
    logger.info(
        "derived %d equations (nominal degree %d, collected degree %d)",
        len(equations),
        nominal,
        collected.degree,
    )
    return CoeffSystem(
        tuple(equations), tuple(names), parameters, aux, ode.mode, ansatz.order, aux_case
    )


# Composition and verification


@dataclass(frozen=True, eq=False)
class ComposedSolution:
    u: Expr
    coefficients: Mapping[str, Expr]
    aux: AuxSolution | None
    c: Expr
    mu: Expr
    provenance: Literal["solver", "paper-reported", "external"] = "solver"

    @property
    def wave_variable(self) -> Expr:
        return mul(self.mu, add(X, mul(MINUS_ONE, self.c, T)))

    def profile(self) -> Expr:
        """``u`` as a function of ``x`` and ``t``."""
        return subs(self.u, {XI.name: self.wave_variable})

    def to_dict(self) -> dict:
        return {
            "u": str(self.u),
            "coefficients": {k: str(v) for k, v in sorted(self.coefficients.items())},
            "aux": None if self.aux is None else str(self.aux.z),
            "c": str(self.c),
            "mu": str(self.mu),
            "provenance": self.provenance,
            "wave_variable": str(self.wave_variable),
        }


def compose(
    assignment: Mapping[str, object],
    aux_sol: AuxSolution,
    c,
    mu,
    order: int | None = None,
    provenance: Literal["solver", "paper-reported", "external"] = "solver",
) -> ComposedSolution:
    indices = [int(k[1:]) for k in assignment if re.fullmatch(r"g[0-9]+", k)]
    N = order if order is not None else max(indices, default=-1)
    if N < 0:
        raise UnboundCoefficientError("g0")
    coefficients = {}
    for i in range(N + 1):
        name = f"g{i}"
        if name not in assignment:
            raise UnboundCoefficientError(name)
        coefficients[name] = to_expr(assignment[name])
    u = add(*(mul(coefficients[f"g{i}"], power(aux_sol.z, i)) for i in range(N + 1)))
    return ComposedSolution(u, coefficients, aux_sol, to_expr(c), to_expr(mu), provenance)


def ode_residual_terms(ode: TravellingODE, sol: ComposedSolution) -> dict[str, Expr]:
    derivs = [sol.u]
    for _ in range(ode.max_order):
        derivs.append(differentiate(derivs[-1], XI))
    table = {profile_symbol(m).name: d for m, d in enumerate(derivs)}
    table.update({C.name: sol.c, MU.name: sol.mu})
    terms: dict[str, Expr] = {}
    for term in terms_of(ode.expression):
        terms[str(term)] = subs(term, table)
    return terms


_D = {
    0: {0: 1.0},
    1: {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12},
    2: {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12},
    3: {-3: 1 / 8, -2: -1.0, -1: 13 / 8, 1: -13 / 8, 2: 1.0, 3: -1 / 8},
}


def _xt_grid(x_interval, nx, t_interval, nt):
    xs = np.linspace(x_interval[0], x_interval[1], nx)
    ts = np.linspace(t_interval[0], t_interval[1], nt)
    xx, tt = np.meshgrid(xs, ts, indexing="ij")
    return xx.ravel(), tt.ravel()


def _wave_parameters(sol: ComposedSolution, params: Mapping[str, object]) -> tuple[complex, ...]:
    return evaluate(sol.c, params), evaluate(sol.mu, params)


def pde_residual_terms(
    problem: PDEProblem,
    sol: ComposedSolution,
    params: Mapping[str, object],
    xx: np.ndarray,
    tt: np.ndarray,
    h: float = 1e-2,
    quad: QuadratureSpec | None = None,
) -> tuple[list[str], np.ndarray]:
    """Values of every PDE term at the points ``(xx[k], tt[k])``.

    Field derivatives use fourth-order central differences with step ``h`` in
    ``x`` and ``t``.
    """
    c, mu = _wave_parameters(sol, params)
    fields = problem.fields
    if any(i > 3 or j > 3 for i, j in fields.values()):
        raise ExpressionError("finite-difference stencils cover derivatives up to order 3")
    shifts = []
    for i, j in fields.values():
        for a, wa in _D[i].items():
            for b, wb in _D[j].items():
                shifts.append((i, j, a, b, wa * wb))
    xi = np.concatenate([mu * ((xx + a * h) - c * (tt + b * h)) for _, _, a, b, _ in shifts])
    profile = np.asarray(Evaluator({**params, XI.name: xi}, quad)(sol.u), dtype=complex)
    profile = np.broadcast_to(profile, xi.shape).reshape(len(shifts), xx.size)
    values: dict[str, np.ndarray] = {}
    for name, (i, j) in fields.items():
        acc = np.zeros(xx.size, dtype=complex)
        for k, (si, sj, _, _, w) in enumerate(shifts):
            if (si, sj) == (i, j):
                acc = acc + w * profile[k]
        values[name] = acc / h ** (i + j)
    ev = Evaluator(values, quad)
    terms = terms_of(problem.bound())
    rows = [np.broadcast_to(ev(t), xx.shape) for t in terms]
    return [str(t) for t in terms], np.array(rows)


def verify_solution(
    target: TravellingODE | PDEProblem,
    sol: ComposedSolution,
    params: Mapping[str, object],
    interval: tuple[float, float],
    npoints: int,
    tol: float,
    t_interval: tuple[float, float] = (0.0, 1.0),
    t_points: int = 5,
    h: float = 1e-2,
    threshold: float = 1e-6,
    quad: QuadratureSpec | None = None,
) -> ResidualReport:
    """Residual of ``sol`` against a travelling ODE (symbolic derivatives) or a PDE.

    For a PDE the grid is ``interval`` x ``t_interval`` in (x, t).
    """
    if isinstance(target, TravellingODE):
        grid = np.linspace(interval[0], interval[1], npoints)
        terms = ode_residual_terms(target, sol)
        return residual_on_grid(terms, XI, grid, params, tol, threshold, watch=(sol.u,), quad=quad)
    xx, tt = _xt_grid(interval, npoints, t_interval, t_points)
    c, mu = _wave_parameters(sol, params)
    centers = mu * (xx - c * tt)
    ev = Evaluator({**params, XI.name: centers}, quad)
    excluded = pole_scan(ev, [sol.u], xx.size, threshold)
    labels, values = pde_residual_terms(target, sol, params, xx, tt, h, quad)
    points = [(float(x), float(t)) for x, t in zip(xx, tt, strict=True)]
    return report_from_values(labels, values, points, excluded, tol)


@dataclass(frozen=True)
class PDESample:
    x: float
    t: float
    re: float
    im: float


def sample_pde(
    sol: ComposedSolution,
    params: Mapping[str, object],
    x_interval: tuple[float, float],
    nx: int,
    t_interval: tuple[float, float],
    nt: int,
    threshold: float = 1e-6,
    quad: QuadratureSpec | None = None,
) -> tuple[list[PDESample], dict[tuple[float, float], str]]:
    """Samples of ``u(x, t)``, rows ordered by x then t, poles excluded."""
    xx, tt = _xt_grid(x_interval, nx, t_interval, nt)
    c, mu = _wave_parameters(sol, params)
    ev = Evaluator({**params, XI.name: mu * (xx - c * tt)}, quad)
    values = np.broadcast_to(ev(sol.u), xx.shape)
    excluded = pole_scan(ev, [sol.u], xx.size, threshold)
    rows = [
        PDESample(float(x), float(t), float(v.real), float(v.imag))
        for k, (x, t, v) in enumerate(zip(xx, tt, values, strict=True))
        if k not in excluded
    ]
    return rows, {(float(xx[k]), float(tt[k])): r for k, r in sorted(excluded.items())}

