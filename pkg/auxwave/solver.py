"""
Numeric solving of the coefficient systems.

Equations free of ``xi`` are turned into complex multivariate polynomials and
searched branch by branch:

1. factors of variables known to be nonzero are divided out;
2. a variable appearing linearly with a constant coefficient is eliminated;
3. a univariate equation is split into its roots (``numpy.roots``);
4. an equation whose terms share a variable ``v`` branches into ``v = 0`` and
   ``v != 0``;
5. whatever is left goes to a multi-start damped Gauss-Newton iteration.

Variables that end up unconstrained are free and set to 1. Every candidate is
polished with Gauss-Newton on the full system and kept only if its residual is
within tolerance.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from auxwave.exceptions import ConfigError, NotPolynomialError, UnsolvedError
from auxwave.expr import XI, Expr, Power, Symbol, expand, factors_of, is_integer, mul, terms_of
from auxwave.numeric import evaluate
from auxwave.outputs import write_json_atomic, write_text_atomic
from auxwave.waves import CoeffSystem

logger = logging.getLogger(__name__)

Strategy = Literal["constant", "pointwise", "export"]

_ZERO_TOL = 1e-11
_ROOT_TOL = 1e-9


class MultiPoly:
    """Sparse polynomial with complex coefficients over a fixed variable list."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], complex] = {}
        for e, c in (terms or {}).items():
            if c != 0:
                self.terms[e] = self.terms.get(e, 0) + complex(c)

    @classmethod
    def constant(cls, nvars: int, value: complex) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> MultiPoly:
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def from_expr(cls, e: Expr, names: Sequence[str]) -> MultiPoly:
        index = {n: i for i, n in enumerate(names)}
        out: dict[tuple[int, ...], complex] = {}
        for term in terms_of(expand(e)):
            exps = [0] * len(names)
            rest = []
            for f in factors_of(term):
                if isinstance(f, Symbol) and f.name in index:
                    exps[index[f.name]] += 1
                elif (
                    isinstance(f, Power)
                    and isinstance(f.base, Symbol)
                    and f.base.name in index
                    and is_integer(f.exponent)
                    and f.exponent.value > 0
                ):
                    exps[index[f.base.name]] += int(f.exponent.value)
                elif f.free_symbols & index.keys():
                    raise NotPolynomialError(f"unknown in non-polynomial position: {f}")
                else:
                    rest.append(f)
            coefficient = evaluate(mul(*rest), {})
            key = tuple(exps)
            out[key] = out.get(key, 0) + coefficient
        return cls(len(names), out)

    def clean(self, tol: float = _ZERO_TOL) -> MultiPoly:
        return MultiPoly(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > tol})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def degree_in(self, v: int) -> int:
        return max((e[v] for e in self.terms), default=0)

    def min_degree_in(self, v: int) -> int:
        return min((e[v] for e in self.terms), default=0)

    def coefficient_in(self, v: int, d: int) -> MultiPoly:
        out = {}
        for e, c in self.terms.items():
            if e[v] == d:
                out[e[:v] + (0,) + e[v + 1 :]] = c
        return MultiPoly(self.nvars, out)

    def divide_power(self, v: int, k: int) -> MultiPoly:
        return MultiPoly(
            self.nvars, {e[:v] + (e[v] - k,) + e[v + 1 :]: c for e, c in self.terms.items()}
        )

    def __add__(self, other: MultiPoly) -> MultiPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2, strict=True))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    def scale(self, k: complex) -> MultiPoly:
        return MultiPoly(self.nvars, {e: c * k for e, c in self.terms.items()})

    def substitute(self, v: int, q: MultiPoly) -> MultiPoly:
        """Replace variable ``v`` by the polynomial ``q``."""
        powers = [MultiPoly.constant(self.nvars, 1)]
        out = MultiPoly(self.nvars)
        for e, c in self.terms.items():
            while len(powers) <= e[v]:
                powers.append(powers[-1] * q)
            rest = MultiPoly(self.nvars, {e[:v] + (0,) + e[v + 1 :]: c})
            out = out + rest * powers[e[v]]
        return out

    def substitute_value(self, v: int, value: complex) -> MultiPoly:
        out: dict[tuple[int, ...], complex] = {}
        for e, c in self.terms.items():
            key = e[:v] + (0,) + e[v + 1 :]
            out[key] = out.get(key, 0) + c * value ** e[v]
        return MultiPoly(self.nvars, out)

    def derivative(self, v: int) -> MultiPoly:
        return MultiPoly(
            self.nvars,
            {e[:v] + (e[v] - 1,) + e[v + 1 :]: c * e[v] for e, c in self.terms.items() if e[v]},
        )

    def __call__(self, x: np.ndarray) -> complex:
        if not self.terms:
            return 0j
        exps = np.array(list(self.terms), dtype=int)
        coefs = np.array(list(self.terms.values()), dtype=complex)
        x = np.asarray(x, dtype=complex)[None, :]
        return complex(coefs @ np.prod(np.power(x, exps), axis=1))

    def univariate_coefficients(self, v: int) -> np.ndarray:
        """Coefficients, highest degree first, of a polynomial in ``v`` alone."""
        out = np.zeros(self.degree_in(v) + 1, dtype=complex)
        for e, c in self.terms.items():
            out[-1 - e[v]] += c
        return out


@dataclass(frozen=True)
class Assignment:
    values: dict[str, complex]
    free: tuple[str, ...]
    residual: float

    def real_values(self) -> dict[str, complex]:
        return {
            k: (complex(v.real, 0) if abs(v.imag) <= 1e-12 else v) for k, v in self.values.items()
        }

    def to_dict(self) -> dict:
        return {
            "values": {k: {"re": v.real, "im": v.imag} for k, v in sorted(self.values.items())},
            "free": list(self.free),
            "residual": self.residual,
        }


@dataclass
class RootFamily:
    """One root of the system followed across the ξ grid; ``None`` where it was lost."""

    rows: list[tuple[float, Assignment | None]]
    spread: dict[str, float]
    xi_independent: bool

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"xi": xi, "assignment": None if a is None else a.to_dict()} for xi, a in self.rows
            ],
            "spread": dict(sorted(self.spread.items())),
            "xi_independent": self.xi_independent,
        }


@dataclass
class PointwiseReport:
    xi_points: list[float]
    families: list[RootFamily]

    @property
    def xi_independent(self) -> bool:
        return any(f.xi_independent for f in self.families)

    def to_dict(self) -> dict:
        return {
            "xi_points": list(self.xi_points),
            "families": [f.to_dict() for f in self.families],
            "xi_independent": self.xi_independent,
        }


@dataclass
class SolveResult:
    strategy: str
    assignments: list[Assignment] = field(default_factory=list)
    export_path: Path | None = None
    pointwise: PointwiseReport | None = None

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "assignments": [a.to_dict() for a in self.assignments],
            "export_path": None if self.export_path is None else str(self.export_path),
            "pointwise": None if self.pointwise is None else self.pointwise.to_dict(),
        }


@dataclass
class _State:
    polys: list[MultiPoly]
    nonzero: frozenset[int]
    fixed: dict[int, complex]
    eliminated: list[tuple[int, MultiPoly]]


def _residual(polys: Sequence[MultiPoly], x: np.ndarray) -> np.ndarray:
    return np.array([p(x) for p in polys], dtype=complex)


def _gauss_newton(
    polys: Sequence[MultiPoly],
    variables: Sequence[int],
    x0: np.ndarray,
    tol: float,
    iterations: int = 200,
) -> np.ndarray | None:
    x = np.array(x0, dtype=complex)
    jac = [[p.derivative(v) for v in variables] for p in polys]
    F = _residual(polys, x)
    for _ in range(iterations):
        norm = np.linalg.norm(F, np.inf)
        if norm <= tol:
            return x
        J = np.array([[d(x) for d in row] for row in jac], dtype=complex)
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        t = 1.0
        while t > 1e-8:
            trial = x.copy()
            trial[list(variables)] += t * step
            F_trial = _residual(polys, trial)
            if np.linalg.norm(F_trial, np.inf) < norm:
                x, F = trial, F_trial
                break
            t /= 2
        else:
            break
    return x if np.linalg.norm(F, np.inf) <= tol else None


class _Search:
    def __init__(self, names: Sequence[str], nonzero: set[str], tol: float, seed: int):
        self.names = list(names)
        self.nvars = len(names)
        self.nonzero = frozenset(self.names.index(n) for n in nonzero if n in self.names)
        self.tol = tol
        self.rng = np.random.default_rng(seed)

    def run(self, polys: list[MultiPoly], limit: int) -> Iterator[tuple[np.ndarray, set[int]]]:
        start = _State(polys, self.nonzero, {}, [])
        count = 0
        for leaf in self._branch(start, depth=0):
            yield leaf
            count += 1
            if count >= limit:
                return

    def _prepare(self, state: _State) -> list[MultiPoly] | None:
        out = []
        for p in state.polys:
            p = p.clean()
            for v in state.nonzero:
                k = p.min_degree_in(v)
                if k:
                    p = p.divide_power(v, k)
            if p.is_zero():
                continue
            if p.is_constant():
                return None
            out.append(p)
        return out

    def _branch(self, state: _State, depth: int) -> Iterator[tuple[np.ndarray, set[int]]]:
        polys = self._prepare(state)
        if polys is None:
            return
        state = _State(polys, state.nonzero, state.fixed, state.eliminated)
        if not polys:
            yield self._leaf(state)
            return
        pivot = self._linear_pivot(state)
        if pivot is not None:
            yield from self._eliminate(state, *pivot, depth)
            return
        univariate = [
            (p.degree_in(next(iter(p.variables()))), p) for p in polys if len(p.variables()) == 1
        ]
        if univariate:
            _, p = min(univariate, key=lambda item: item[0])
            (v,) = p.variables()
            roots = np.roots(p.univariate_coefficients(v))
            seen: list[complex] = []
            for r in roots:
                if any(abs(r - s) <= _ROOT_TOL * (1 + abs(s)) for s in seen):
                    continue
                seen.append(r)
                if v in state.nonzero and abs(r) <= _ROOT_TOL:
                    continue
                logger.debug("%sbranch %s = %s", "  " * depth, self.names[v], r)
                yield from self._branch(self._fix(state, v, complex(r)), depth + 1)
            return
        for p in polys:
            common = [v for v in p.variables() if p.min_degree_in(v) > 0 and v not in state.nonzero]
            if common:
                v = common[0]
                name = self.names[v]
                logger.debug("%sbranch %s = 0 | %s != 0", "  " * depth, name, name)
                yield from self._branch(self._fix(state, v, 0j), depth + 1)
                split = _State(state.polys, state.nonzero | {v}, state.fixed, state.eliminated)
                yield from self._branch(split, depth + 1)
                return
        yield from self._fallback(state)

    def _linear_pivot(self, state: _State) -> tuple[MultiPoly, int] | None:
        best = None
        for p in sorted(state.polys, key=lambda q: len(q.terms)):
            for v in sorted(p.variables()):
                if p.degree_in(v) != 1:
                    continue
                k = p.coefficient_in(v, 1)
                if k.is_constant() and not k.is_zero():
                    best = (p, v)
                    break
            if best:
                return best
        return None

    def _eliminate(self, state: _State, p: MultiPoly, v: int, depth: int):
        k = p.coefficient_in(v, 1).terms[(0,) * self.nvars]
        expr = p.coefficient_in(v, 0).scale(-1 / k).clean()
        if v in state.nonzero and expr.is_zero():
            return
        logger.debug("%seliminate %s", "  " * depth, self.names[v])
        polys = [q.substitute(v, expr) for q in state.polys if q is not p]
        yield from self._branch(
            _State(polys, state.nonzero, state.fixed, [*state.eliminated, (v, expr)]), depth + 1
        )

    def _fix(self, state: _State, v: int, value: complex) -> _State:
        polys = [q.substitute_value(v, value) for q in state.polys]
        return _State(polys, state.nonzero, {**state.fixed, v: value}, state.eliminated)

    def _leaf(self, state: _State) -> tuple[np.ndarray, set[int]]:
        x = np.ones(self.nvars, dtype=complex)
        eliminated = {v for v, _ in state.eliminated}
        free = {v for v in range(self.nvars) if v not in state.fixed and v not in eliminated}
        for v, value in state.fixed.items():
            x[v] = value
        for v, expr in reversed(state.eliminated):
            x[v] = expr(x)
        return x, free

    def _fallback(self, state: _State) -> Iterator[tuple[np.ndarray, set[int]]]:
        variables = sorted(set().union(*(p.variables() for p in state.polys)))
        names = [self.names[v] for v in variables]
        logger.debug("Gauss-Newton on %d equations in %s", len(state.polys), names)
        found: list[np.ndarray] = []
        for _ in range(24):
            x0 = np.ones(self.nvars, dtype=complex)
            x0[variables] = self.rng.normal(size=len(variables)) + 1j * self.rng.normal(
                size=len(variables)
            )
            x = _gauss_newton(state.polys, variables, x0, self.tol * 1e-2)
            if x is None or any(abs(x[v]) <= _ROOT_TOL for v in variables if v in state.nonzero):
                continue
            if any(np.allclose(x[variables], y[variables], atol=1e-8) for y in found):
                continue
            found.append(x)
            fixed = {**state.fixed, **{v: complex(x[v]) for v in variables}}
            yield self._leaf(_State([], state.nonzero, fixed, state.eliminated))


def solve_polynomials(
    equations: Sequence[Expr],
    unknowns: Sequence[str],
    nonzero: Sequence[str] = (),
    tol: float = 1e-10,
    limit: int = 32,
    seed: int = 0,
) -> list[Assignment]:
    """All assignments found for ``equations = 0`` with residual at most ``tol``."""
    names = list(unknowns)
    polys = [MultiPoly.from_expr(e, names) for e in equations]
    search = _Search(names, set(nonzero), tol, seed)
    accepted: list[Assignment] = []
    all_vars = list(range(len(names)))
    for x, free in search.run(polys, limit):
        residual = float(np.linalg.norm(_residual(polys, x), np.inf)) if polys else 0.0
        if residual > tol:
            polished = _gauss_newton(polys, all_vars, x, tol)
            if polished is None:
                logger.debug("discarded candidate with residual %.3e", residual)
                continue
            x = polished
            residual = float(np.linalg.norm(_residual(polys, x), np.inf))
        values = {n: complex(x[i]) for i, n in enumerate(names)}
        if any(
            all(abs(values[n] - a.values[n]) <= 1e-8 * (1 + abs(a.values[n])) for n in names)
            for a in accepted
        ):
            continue
        assignment = Assignment(values, tuple(names[v] for v in sorted(free)), residual)
        logger.info("accepted assignment %s (residual %.2e)", values, residual)
        accepted.append(assignment)
    return accepted


def export_system(system: CoeffSystem, out_dir: str | Path) -> Path:
    """Write ``system.txt`` (one ``eq[i] := <expr> = 0;`` per power of z) and ``system.json``."""
    out_dir = Path(out_dir)
    lines = [f"eq[{i}] := {e} = 0;" for i, e in enumerate(system.equations)]
    path = write_text_atomic(out_dir / "system.txt", "\n".join(lines) + "\n")
    write_json_atomic(out_dir / "system.json", system.sidecar())
    logger.info("exported %d equations to %s", len(lines), path)
    return path


def _check_bound(system: CoeffSystem):
    allowed = set(system.unknowns) | {XI.name}
    extra = set().union(*(e.free_symbols for e in system.equations)) - allowed
    if extra:
        raise ConfigError(f"system parameters not bound: {', '.join(sorted(extra))}")


def solve_system(
    system: CoeffSystem,
    strategy: Strategy = "constant",
    out_dir: str | Path | None = None,
    tol: float = 1e-10,
    xi_points: Sequence[float] = (-1.0, -0.5, 0.0, 0.5, 1.0),
    seed: int = 0,
) -> SolveResult:
    """Solve a (parameter-bound) coefficient system for its unknowns.

    The leading ansatz coefficient is required to be nonzero.
    """
    nonzero = [f"g{system.order}"]
    if strategy == "export":
        if out_dir is None:
            raise ConfigError("export strategy needs an output directory")
        return SolveResult("export", export_path=export_system(system, out_dir))
    _check_bound(system)
    if strategy == "constant":
        if system.depends_on_xi:
            path = export_system(system, out_dir) if out_dir is not None else None
            raise UnsolvedError("the system depends on xi; use pointwise or export", path)
        found = solve_polynomials(system.equations, system.unknowns, nonzero, tol, seed=seed)
        if not found:
            path = export_system(system, out_dir) if out_dir is not None else None
            raise UnsolvedError("no assignment reached the tolerance", path)
        return SolveResult("constant", found)
    if strategy == "pointwise":
        return SolveResult("pointwise", pointwise=_pointwise(system, nonzero, tol, xi_points, seed))
    raise ConfigError(f"unknown strategy {strategy!r}")


def _distance(a: Assignment, b: Assignment) -> float:
    return max((abs(a.values[n] - b.values[n]) for n in a.values), default=0.0)


def _pointwise(system, nonzero, tol, xi_points, seed) -> PointwiseReport:
    points = [float(xi) for xi in xi_points]
    tracks: list[list[Assignment | None]] = []
    for k, xi in enumerate(points):
        bound = system.bind({XI.name: xi})
        found = solve_polynomials(bound.equations, bound.unknowns, nonzero, tol, seed=seed)
        logger.info("pointwise xi=%g: %d assignment(s)", xi, len(found))
        last = [next((a for a in reversed(t) if a is not None), None) for t in tracks]
        pairs = sorted(
            (_distance(prev, a), i, j)
            for i, prev in enumerate(last)
            if prev is not None
            for j, a in enumerate(found)
        )
        taken_tracks: set[int] = set()
        taken_roots: set[int] = set()
        for track in tracks:
            track.append(None)
        for _, i, j in pairs:
            if i in taken_tracks or j in taken_roots:
                continue
            tracks[i][k] = found[j]
            taken_tracks.add(i)
            taken_roots.add(j)
        for j, a in enumerate(found):
            if j not in taken_roots:
                tracks.append([None] * k + [a])
    families = [_family(points, track, system.unknowns) for track in tracks]
    logger.info(
        "pointwise: %d root famil%s, %d independent of xi",
        len(families),
        "y" if len(families) == 1 else "ies",
        sum(f.xi_independent for f in families),
    )
    return PointwiseReport(points, families)


def _family(points, track, unknowns) -> RootFamily:
    solved = [a for a in track if a is not None]
    first = solved[0]
    spread = {n: max(abs(a.values[n] - first.values[n]) for a in solved) for n in unknowns}
    independent = len(solved) == len(track) and all(s <= 1e-6 for s in spread.values())
    return RootFamily(list(zip(points, track, strict=True)), spread, independent)
