"""
Complex-valued numeric evaluation of expressions.

Everything evaluates over numpy complex arrays so a whole sample grid is one
call. Special functions come from ``scipy.special``; ``Ei1`` is E1 with the
principal branch and the limit from the upper half-plane on the cut
``(-inf, 0]``. Integral nodes use adaptive Gauss-Kronrod (7/15) quadrature with
bisection along the straight path from 0 to the upper limit.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from auxwave.exceptions import (
    EvaluationError,
    PoleError,
    QuadratureError,
    StencilError,
    UnboundSymbolError,
    VerificationError,
)
from auxwave.expr import (
    ONE,
    Expr,
    FuncApp,
    IntegralRemainder,
    NamedConst,
    Power,
    Product,
    RationalConst,
    Sum,
    Symbol,
    mul,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 10_000


DEFAULT_QUADRATURE = QuadratureSpec()

# Kronrod 15-point rule: positive nodes and weights, center last (QUADPACK qk15).
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
# Gauss 7-point weights at _XGK[1], _XGK[3], _XGK[5] and the center.
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KRONROD = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3], strict=True):
    _GAUSS[_i] = _GAUSS[14 - _i] = _w
_GAUSS[7] = _WG[3]


def ei1(w):
    """Exponential integral E1 on the principal branch, upper limit on the cut."""
    w = np.asarray(w, dtype=complex)
    on_cut = (w.imag == 0) & (w.real < 0)
    with np.errstate(all="ignore"):
        out = np.asarray(special.exp1(np.where(on_cut, 1.0 + 0j, w)), dtype=complex)
        if np.any(on_cut):
            cut = -special.expi(-w.real) - 1j * math.pi
            out = np.where(on_cut, cut, out)
    return out


def erf(w):
    return np.asarray(special.erf(np.asarray(w, dtype=complex)), dtype=complex)


_FUNCTIONS: dict[str, Callable] = {
    "exp": np.exp,
    "ln": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "erf": erf,
    "Ei1": ei1,
}


def _as_array(value) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value.astype(complex, copy=False)
    if isinstance(value, (list, tuple)):
        return np.array([complex(v) for v in value], dtype=complex)
    return np.asarray(complex(value), dtype=complex)


def integrate_segments(f: Callable, lo, hi, spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Integrate ``f`` along the straight segments ``lo[k] -> hi[k]``.

    ``f`` maps an array of complex points to values of the same shape. All
    pending sub-intervals are refined together; a sub-interval is accepted once
    the Gauss/Kronrod difference is below ``max(abs_tol, rel_tol * |K|)``.
    """
    lo = np.asarray(lo, dtype=complex).ravel()
    hi = np.asarray(hi, dtype=complex).ravel()
    total = np.zeros(lo.shape, dtype=complex)
    splits = np.zeros(lo.shape, dtype=int)
    owner = np.arange(lo.size)
    while lo.size:
        half = (hi - lo) / 2
        mid = (hi + lo) / 2
        points = mid[:, None] + half[:, None] * _NODES[None, :]
        values = np.broadcast_to(np.asarray(f(points), dtype=complex), points.shape)
        if not np.all(np.isfinite(values)):
            raise PoleError("non-finite integrand on the quadrature path")
        kronrod = half * (values @ _KRONROD)
        gauss = half * (values @ _GAUSS)
        error = np.abs(kronrod - gauss)
        done = error <= np.maximum(spec.abs_tol, spec.rel_tol * np.abs(kronrod))
        np.add.at(total, owner[done], kronrod[done])
        todo = ~done
        if not np.any(todo):
            break
        np.add.at(splits, owner[todo], 1)
        if splits.max() > spec.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {spec.max_subdivisions} subdivisions "
                f"(error estimate {error[todo].max():.3e})"
            )
        lo, hi, mid, owner = lo[todo], hi[todo], mid[todo], owner[todo]
        lo, hi, owner = np.concatenate([lo, mid]), np.concatenate([mid, hi]), np.tile(owner, 2)
        logger.debug("quadrature: %d pending sub-intervals", lo.size)
    return total


def _integrate_from_zero(f: Callable, uppers: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    uppers = uppers.ravel()
    if np.all(uppers.imag == 0):
        # chain the segments between sorted real limits
        knots = np.unique(np.concatenate([uppers.real, [0.0]]))
        pieces = integrate_segments(f, knots[:-1], knots[1:], spec)
        cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
        at_zero = cumulative[np.searchsorted(knots, 0.0)]
        return cumulative[np.searchsorted(knots, uppers.real)] - at_zero
    return integrate_segments(f, np.zeros_like(uppers), uppers, spec)


class Evaluator:
    """Evaluate expressions under fixed bindings, memoizing shared subtrees.

    Bindings may be scalars or arrays; arrays broadcast against each other.
    """

    def __init__(self, bindings: Mapping[str, object], quad: QuadratureSpec | None = None):
        self.bindings = {name: _as_array(v) for name, v in bindings.items()}
        self.quad = quad or DEFAULT_QUADRATURE
        self._memo: dict[Expr, np.ndarray] = {}

    def __call__(self, e: Expr) -> np.ndarray:
        hit = self._memo.get(e)
        if hit is None:
            with np.errstate(all="ignore"):
                hit = self._eval(e)
            self._memo[e] = hit
        return hit

    def _eval(self, e: Expr) -> np.ndarray:
        if isinstance(e, RationalConst):
            return np.asarray(complex(float(e.value)))
        if isinstance(e, NamedConst):
            return np.asarray(1j if e.name == "I" else complex(math.pi))
        if isinstance(e, Symbol):
            try:
                return self.bindings[e.name]
            except KeyError:
                raise UnboundSymbolError(e.name) from None
        if isinstance(e, Sum):
            out = self(e.terms[0])
            for t in e.terms[1:]:
                out = out + self(t)
            return out
        if isinstance(e, Product):
            out = self(e.factors[0])
            for f in e.factors[1:]:
                out = out * self(f)
            return out
        if isinstance(e, Power):
            return self._power(e)
        if isinstance(e, FuncApp):
            return np.asarray(_FUNCTIONS[e.name](self(e.arg)), dtype=complex)
        if isinstance(e, IntegralRemainder):
            return self._integral(e)
        raise EvaluationError(f"cannot evaluate {type(e).__name__}")

    def _power(self, e: Power) -> np.ndarray:
        base = self(e.base)
        if isinstance(e.exponent, RationalConst):
            n = e.exponent.value
            if n.denominator == 1:
                return base ** int(n)
            if n == Fraction(1, 2):
                return np.sqrt(base)
            if n == Fraction(-1, 2):
                return 1 / np.sqrt(base)
            exponent = np.asarray(complex(float(n)))
        else:
            exponent = self(e.exponent)
        out = np.power(base, exponent)
        return np.where(base == 0, np.where(exponent.real > 0, 0j, np.inf + 0j), out)

    def _integral(self, e: IntegralRemainder) -> np.ndarray:
        upper = self(e.upper)
        params = sorted(e.integrand.free_symbols - {e.var.name})
        for name in params:
            if name not in self.bindings:
                raise UnboundSymbolError(name)
        shape = np.broadcast_shapes(upper.shape, *(self.bindings[n].shape for n in params))
        if all(self.bindings[n].ndim == 0 for n in params):
            fixed = {n: self.bindings[n] for n in params}

            def integrand(points):
                return Evaluator({**fixed, e.var.name: points}, self.quad)(e.integrand)

            values = _integrate_from_zero(integrand, np.broadcast_to(upper, shape), self.quad)
            return values.reshape(shape)
        # array-valued parameters: one scalar quadrature per point
        out = np.empty(shape, dtype=complex)
        uppers = np.broadcast_to(upper, shape)
        arrays = {n: np.broadcast_to(self.bindings[n], shape) for n in params}
        for index in np.ndindex(shape):
            fixed = {n: arrays[n][index] for n in params}

            def integrand(points, fixed=fixed):
                return Evaluator({**fixed, e.var.name: points}, self.quad)(e.integrand)

            out[index] = _integrate_from_zero(integrand, np.asarray([uppers[index]]), self.quad)[0]
        return out


def evaluate_array(e: Expr, bindings: Mapping[str, object], quad: QuadratureSpec | None = None):
    """Evaluate without a finiteness check; the result may hold inf/nan."""
    return np.asarray(Evaluator(bindings, quad)(e), dtype=complex)


def evaluate(e: Expr, bindings: Mapping[str, object], quad: QuadratureSpec | None = None):
    """Evaluate ``e``; scalar bindings give a Python complex.

    Raises PoleError when any value is not finite.
    """
    value = evaluate_array(e, bindings, quad)
    if not np.all(np.isfinite(value)):
        raise PoleError(f"non-finite value of {e}")
    return complex(value) if value.ndim == 0 else value


def integrate(
    integrand: Expr,
    var: str,
    lo,
    hi,
    bindings: Mapping[str, object] | None = None,
    quad: QuadratureSpec | None = None,
) -> complex:
    """Definite integral of ``integrand`` along the straight path ``lo -> hi``."""
    fixed = dict(bindings or {})
    spec = quad or DEFAULT_QUADRATURE

    def f(points):
        return Evaluator({**fixed, var: points}, spec)(integrand)

    return complex(integrate_segments(f, [lo], [hi], spec)[0])


def equal_numeric(a: Expr, b: Expr, bindings: Mapping[str, object], tol: float = 1e-10) -> bool:
    """True iff ``|a - b| <= tol * max(1, |a|)`` at every sample.

    ``bindings`` maps symbols to sample sequences (zipped) or scalars.
    """
    samples = {k: np.atleast_1d(_as_array(v)) for k, v in bindings.items()}
    count = max((v.size for v in samples.values()), default=1)
    va = evaluate_array(a, samples)
    vb = evaluate_array(b, samples)
    va, vb = np.broadcast_to(va, (count,)), np.broadcast_to(vb, (count,))
    bad = ~(np.isfinite(va) & np.isfinite(vb))
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        sample = {k: complex(np.broadcast_to(v, (count,))[i]) for k, v in samples.items()}
        raise PoleError(f"evaluation failed at sample {sample}")
    return bool(np.all(np.abs(va - vb) <= tol * np.maximum(1.0, np.abs(va))))


# Numeric differentiation

_CENTRAL = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def numeric_diff(f: Callable[[complex], complex], x0: complex, order: int, h: float | None = None):
    """Central difference of the given order with one Richardson step.

    The plain stencil has error O(h^2); combining steps h and h/2 as
    (4 D(h/2) - D(h)) / 3 leaves O(h^4).
    """
    if order not in _CENTRAL:
        raise ValueError("order must be 1, 2 or 3")
    step = 1e-3 * (1 + abs(x0)) if h is None else h
    cache: dict[complex, complex] = {}

    def value(x):
        if x not in cache:
            try:
                v = complex(f(x))
            except PoleError as err:
                raise StencilError(f"stencil point {x} is excluded: {err}") from err
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise StencilError(f"stencil point {x} is not finite")
            cache[x] = v
        return cache[x]

    def central(hh):
        return sum(w * value(x0 + k * hh) for k, w in _CENTRAL[order]) / hh**order

    return (4 * central(step / 2) - central(step)) / 3


def expression_function(
    e: Expr,
    var: str,
    bindings: Mapping[str, object] | None = None,
    quad: QuadratureSpec | None = None,
):
    fixed = dict(bindings or {})
    return lambda x: evaluate(e, {**fixed, var: x}, quad)


def grid_derivative(
    e: Expr,
    var: str,
    grid: np.ndarray,
    bindings: Mapping[str, object] | None = None,
    quad: QuadratureSpec | None = None,
    shrink: float = 4.0,
    levels: int = 5,
) -> np.ndarray:
    """First derivative of ``e`` at every grid point, with per-point step control.

    Each level is the Richardson-extrapolated central difference of
    :func:`numeric_diff`, evaluated for the whole grid at once. Steps start at
    ``1e-3 * (1 + |x|)`` and shrink by ``shrink``; every point keeps the estimate
    that moved least from the level before. Points whose stencils are never
    finite come back as nan.
    """
    grid = np.asarray(grid, dtype=float)
    fixed = dict(bindings or {})

    def f(x):
        return np.broadcast_to(evaluate_array(e, {**fixed, var: x}, quad), grid.shape)

    def richardson(h):
        coarse = (f(grid + h) - f(grid - h)) / (2 * h)
        fine = (f(grid + h / 2) - f(grid - h / 2)) / h
        return (4 * fine - coarse) / 3

    step = 1e-3 * (1 + np.abs(grid))
    with np.errstate(all="ignore"):
        previous = best = richardson(step)
        moved = np.full(grid.shape, np.inf)
        for _ in range(levels):
            step = step / shrink
            current = richardson(step)
            change = np.abs(current - previous)
            take = (change < moved) | (~np.isfinite(best) & np.isfinite(current))
            best = np.where(take, current, best)
            moved = np.where(take, change, moved)
            previous = current
    return np.where(np.isfinite(best), best, np.nan)


# Pole handling


@dataclass(frozen=True)
class Quotient:
    numerator: Expr
    denominator: Expr


def quotients(e: Expr) -> list[Quotient]:
    """Every (numerator, denominator) pair formed by a negative rational power."""
    found: dict[Quotient, None] = {}

    def negative(f):
        return (
            isinstance(f, Power)
            and isinstance(f.exponent, RationalConst)
            and f.exponent.value < 0
        )

    def visit(node, inside_product):
        if isinstance(node, Product):
            rest = [f for f in node.factors if not negative(f)]
            for f in node.factors:
                if negative(f):
                    found[Quotient(mul(*rest), f.base)] = None
            for f in node.factors:
                visit(f, True)
            return
        if negative(node) and not inside_product:
            found[Quotient(ONE, node.base)] = None
        if isinstance(node, Power):
            visit(node.base, False)
            visit(node.exponent, False)
        elif isinstance(node, Sum):
            for t in node.terms:
                visit(t, False)
        elif isinstance(node, FuncApp):
            visit(node.arg, False)
        elif isinstance(node, IntegralRemainder):
            visit(node.upper, False)

    visit(e, False)
    return list(found)


def pole_scan(
    evaluator: Evaluator,
    exprs: Iterable[Expr],
    size: int,
    threshold: float = 1e-6,
) -> dict[int, str]:
    """Indices of grid points to exclude, with the reason.

    A point is excluded when a denominator drops below
    ``threshold * (|numerator| + 1)`` or a value is not finite.
    """
    excluded: dict[int, str] = {}
    for e in exprs:
        values = np.broadcast_to(evaluator(e), (size,))
        for i in np.flatnonzero(~np.isfinite(values)):
            excluded.setdefault(int(i), "non-finite value")
        for q in quotients(e):
            den = np.broadcast_to(evaluator(q.denominator), (size,))
            num = np.broadcast_to(evaluator(q.numerator), (size,))
            with np.errstate(invalid="ignore"):
                near = np.abs(den) < threshold * (np.abs(num) + 1)
            for i in np.flatnonzero(near):
                excluded.setdefault(int(i), f"denominator near zero: {q.denominator}")
    return excluded


def _crosses_zero(den: np.ndarray) -> bool:
    """True if the polyline through consecutive values passes (almost) through 0."""
    start, step = den[:-1], np.diff(den)
    length2 = np.abs(step) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip(-(np.conj(start) * step).real / length2, 0.0, 1.0)
    t = np.where(length2 > 0, t, 0.0)
    distance = np.abs(start + t * step)
    return bool(np.any(distance < 0.25 * np.sqrt(length2)))


def find_pole_free_interval(
    e: Expr,
    var: str,
    bindings: Mapping[str, object],
    width: float = 2.0,
    reach: float = 6.0,
    npoints: int = 401,
    margin: float = 1e-3,
    quad: QuadratureSpec | None = None,
) -> tuple[float, float]:
    """First window of ``width`` (centers 0, 0.5, -0.5, 1, ...) free of poles."""
    centers = [0.0]
    k = 1
    while k * 0.5 <= reach:
        centers += [k * 0.5, -k * 0.5]
        k += 1
    parts = quotients(e)
    for center in centers:
        lo, hi = center - width / 2, center + width / 2
        grid = np.linspace(lo, hi, npoints)
        ev = Evaluator({**bindings, var: grid}, quad)
        try:
            values = np.broadcast_to(ev(e), grid.shape)
        except EvaluationError:
            continue
        if not np.all(np.isfinite(values)):
            continue
        clear = True
        for q in parts:
            den = np.broadcast_to(ev(q.denominator), grid.shape)
            num = np.broadcast_to(ev(q.numerator), grid.shape)
            if np.any(np.abs(den) < margin * (np.abs(num) + 1)) or _crosses_zero(den):
                clear = False
                break
        if clear:
            logger.info("pole-free window for %s: [%g, %g]", var, lo, hi)
            return lo, hi
    raise VerificationError(f"no pole-free window of width {width} within +-{reach}")


# Curve sampling


@dataclass(frozen=True)
class CurveSample:
    point: float
    re: float
    im: float


@dataclass
class Curve:
    samples: list[CurveSample]
    excluded: dict[float, str]


def sample_curve(
    e: Expr,
    var: str,
    interval: tuple[float, float],
    npoints: int,
    bindings: Mapping[str, object] | None = None,
    threshold: float = 1e-6,
    quad: QuadratureSpec | None = None,
) -> Curve:
    grid = np.linspace(interval[0], interval[1], npoints)
    ev = Evaluator({**(bindings or {}), var: grid}, quad)
    values = np.broadcast_to(ev(e), grid.shape)
    excluded = pole_scan(ev, [e], grid.size, threshold)
    for i, reason in sorted(excluded.items()):
        logger.debug("excluded %s=%.17g: %s", var, grid[i], reason)
    samples = [
        CurveSample(float(x), float(v.real), float(v.imag))
        for i, (x, v) in enumerate(zip(grid, values, strict=True))
        if i not in excluded
    ]
    return Curve(samples, {float(grid[i]): reason for i, reason in sorted(excluded.items())})


def realness(values: np.ndarray) -> bool:
    values = np.asarray(values)
    return bool(np.all(np.abs(values.imag) <= 1e-9 * (1 + np.abs(values.real))))


__all__ = [
    "Curve",
    "CurveSample",
    "Evaluator",
    "QuadratureSpec",
    "Quotient",
    "ei1",
    "equal_numeric",
    "erf",
    "evaluate",
    "evaluate_array",
    "expression_function",
    "find_pole_free_interval",
    "grid_derivative",
    "integrate",
    "integrate_segments",
    "numeric_diff",
    "pole_scan",
    "quotients",
    "realness",
    "sample_curve",
]
