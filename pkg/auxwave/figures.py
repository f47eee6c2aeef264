"""Curve data for the figure recipes under ``docs/recipes``."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from auxwave.bernoulli import ClassicalBernoulli, classical_solution
from auxwave.config import Recipe, RunConfig, parse_bindings
from auxwave.exceptions import ConfigError, UnsolvedError
from auxwave.expr import XI, Expr, subs, to_expr
from auxwave.numeric import QuadratureSpec, realness, sample_curve
from auxwave.outputs import write_csv_atomic
from auxwave.parser import parse
from auxwave.pipeline import resolve_aux, run_pipeline
from auxwave.reports import printed_case1_coefficients
from auxwave.waves import ComposedSolution, compose, sample_pde

logger = logging.getLogger(__name__)


@dataclass
class FigureData:
    name: str
    kind: str
    header: list[str]
    rows: list[list[float]]
    excluded: dict = field(default_factory=dict)
    expression: str = ""
    path: Path | None = None

    @property
    def finite(self) -> bool:
        return bool(self.rows) and bool(np.all(np.isfinite(np.asarray(self.rows, dtype=float))))

    @property
    def real(self) -> bool:
        re = np.asarray([r[-2] for r in self.rows], dtype=float)
        im = np.asarray([r[-1] for r in self.rows], dtype=float)
        return realness(re + 1j * im)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "rows": len(self.rows),
            "excluded": len(self.excluded),
            "finite": self.finite,
            "real": self.real,
            "path": None if self.path is None else str(self.path),
        }


def recipe_expression(recipe: Recipe) -> Expr | ComposedSolution:
    """The sampled object: an expression in ``xi`` or a composed solution."""
    if recipe.kind == "expression":
        return subs(parse(recipe.expr), recipe.params)
    if recipe.kind == "classical":
        cb = ClassicalBernoulli(to_expr(recipe.a), to_expr(recipe.b), recipe.k, to_expr(recipe.xi0))
        return classical_solution(cb, recipe.branch)
    _, aux_sol = resolve_aux(str(recipe.case))
    if recipe.kind == "aux":
        return subs(aux_sol.z, recipe.params)
    return _composed(recipe, aux_sol)


def _composed(recipe: Recipe, aux_sol) -> ComposedSolution:
    source = recipe.coefficients.strip()
    if source == "printed-case1":
        coefficients = {"g0": recipe.params.get("g0", 0), **printed_case1_coefficients()}
        provenance = "paper-reported"
        c = recipe.c if recipe.c is not None else 1
    elif source == "solve":
        config = RunConfig(
            command="sample",
            aux_case=str(recipe.case),
            params={k: v for k, v in recipe.params.items() if k != "c"},
            mu=recipe.mu,
        )
        result = run_pipeline(config)
        records = [r for r in result.records if r.passed]
        if not records:
            raise UnsolvedError(f"recipe {recipe.name}: no verified solution")
        sol = records[0].solution
        coefficients, c, provenance = dict(sol.coefficients), sol.c, "solver"
    else:
        coefficients = parse_bindings(source)
        provenance = "external"
        c = recipe.c if recipe.c is not None else 1
    sol = compose(coefficients, aux_sol, c, recipe.mu, provenance=provenance)
    bindings = {**recipe.params, "c": sol.c, "mu": sol.mu}
    u = subs(sol.u, bindings)
    return ComposedSolution(u, sol.coefficients, sol.aux, sol.c, sol.mu, provenance)


def solution_from_dict(data: Mapping[str, object]) -> ComposedSolution:
    """A composed solution from its JSON form (``u``, ``c``, ``mu`` as expression text).

    ``params``, when present, are substituted into ``u``, ``c`` and ``mu``.
    """
    missing = [key for key in ("u", "c", "mu") if key not in data]
    if missing:
        raise ConfigError(f"solution lacks {', '.join(missing)}")
    params = parse_bindings([f"{k}={v}" for k, v in (data.get("params") or {}).items()])
    u, c, mu = (subs(parse(str(data[key])), params) for key in ("u", "c", "mu"))
    coefficients = {k: parse(str(v)) for k, v in (data.get("coefficients") or {}).items()}
    return ComposedSolution(u, coefficients, None, c, mu, "external")


def sample_solution(
    name: str,
    sol: ComposedSolution,
    interval: tuple[float, float],
    npoints: int,
    t_interval: tuple[float, float] | None = None,
    t_points: int = 11,
    kind: str = "composed",
    quad: QuadratureSpec | None = None,
) -> FigureData:
    """Profile ``u(xi)``, or ``u(x, t)`` on a grid when ``t_interval`` is given."""
    if t_interval is None:
        return _sample_xi(name, kind, sol.u, interval, npoints, quad)
    samples, excluded = sample_pde(sol, {}, interval, npoints, t_interval, t_points, quad=quad)
    rows = [[s.x, s.t, s.re, s.im] for s in samples]
    return FigureData(name, kind, ["x", "t", "re", "im"], rows, excluded, str(sol.u))


def _sample_xi(name, kind, e: Expr, interval, npoints, quad) -> FigureData:
    extra = e.free_symbols - {XI.name}
    if extra:
        raise ConfigError(f"{name}: unbound {', '.join(sorted(extra))}")
    curve = sample_curve(e, XI.name, interval, npoints, quad=quad)
    rows = [[s.point, s.re, s.im] for s in curve.samples]
    return FigureData(name, kind, ["xi", "re", "im"], rows, curve.excluded, str(e))


def sample_recipe(recipe: Recipe, quad: QuadratureSpec | None = None) -> FigureData:
    target = recipe_expression(recipe)
    if isinstance(target, ComposedSolution):
        return sample_solution(
            recipe.name,
            target,
            recipe.interval,
            recipe.npoints,
            recipe.t_interval,
            recipe.t_points,
            recipe.kind,
            quad,
        )
    return _sample_xi(recipe.name, recipe.kind, target, recipe.interval, recipe.npoints, quad)


def write_figure(data: FigureData, path: str | Path) -> Path:
    data.path = write_csv_atomic(path, data.header, data.rows)
    logger.info("figure %s: %d rows -> %s", data.name, len(data.rows), data.path)
    return data.path


def run_recipe(recipe: Recipe, out_dir: str | Path, quad: QuadratureSpec | None = None):
    data = sample_recipe(recipe, quad)
    write_figure(data, Path(out_dir) / recipe.filename)
    return data
