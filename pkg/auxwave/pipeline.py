"""
End-to-end runs of the auxiliary-equation method on the b-equation.

``run_pipeline`` goes PDE -> travelling ODE -> balance -> coefficient system ->
assignments -> composed solutions -> residual reports, writing every
artifact to ``config.out_dir`` when one is given.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

from auxwave.bernoulli import AuxEquation, AuxSolution
from auxwave.catalog import DEFAULT_PARAMS, case1_reduced, catalog_case
from auxwave.config import RunConfig
from auxwave.exceptions import AuxwaveError, UnsolvedError
from auxwave.expr import ZERO, subs
from auxwave.outputs import write_json_atomic
from auxwave.reports import CrossCheckReport, case1_cross_check, write_cross_check
from auxwave.residuals import ResidualReport
from auxwave.solver import SolveResult, export_system, solve_system
from auxwave.waves import (
    Ansatz,
    BalanceResult,
    CoeffSystem,
    ComposedSolution,
    PDEProblem,
    TravellingODE,
    b_equation,
    balance,
    compose,
    derive_system,
    reduce_travelling,
    verify_solution,
)

logger = logging.getLogger(__name__)

AUX_PARAMETERS = ("A", "B", "C", "C1")


def resolve_aux(case: str) -> tuple[AuxEquation, AuxSolution]:
    if case == "case1-reduced":
        return case1_reduced()
    return catalog_case(int(case))


@dataclass
class SolutionRecord:
    solution: ComposedSolution
    ode_report: ResidualReport | None = None
    pde_report: ResidualReport | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        checks = [r for r in (self.ode_report, self.pde_report) if r is not None]
        return bool(checks) and self.error is None and all(r.passed for r in checks)

    def to_dict(self) -> dict:
        return {
            "solution": self.solution.to_dict(),
            "ode_report": None if self.ode_report is None else self.ode_report.to_dict(),
            "pde_report": None if self.pde_report is None else self.pde_report.to_dict(),
            "error": self.error,
            "passed": self.passed,
        }


@dataclass
class PipelineResult:
    config: RunConfig
    problem: PDEProblem
    ode: TravellingODE
    balance: BalanceResult
    system: CoeffSystem
    status: str = "derived"
    solve: SolveResult | None = None
    records: list[SolutionRecord] = field(default_factory=list)
    cross_check: CrossCheckReport | None = None
    export_path: Path | None = None

    @property
    def passed(self) -> bool:
        return any(r.passed and not _is_constant(r.solution) for r in self.records)

    def to_dict(self) -> dict:
        return {
            "config": self.config.describe(),
            "pde": str(self.problem),
            "ode": {"expression": str(self.ode), "mode": self.ode.mode},
            "balance": {
                "order": self.balance.order,
                "candidates": list(self.balance.candidates),
                "degrees": [list(d) for d in self.balance.degrees],
            },
            "system": {
                "equations": len(self.system.equations),
                "unknowns": list(self.system.unknowns),
                "depends_on_xi": self.system.depends_on_xi,
            },
            "status": self.status,
            "solve": None if self.solve is None else self.solve.to_dict(),
            "solutions": [r.to_dict() for r in self.records],
            "cross_check": None if self.cross_check is None else self.cross_check.to_dict(),
            "export_path": None if self.export_path is None else str(self.export_path),
        }


def _is_constant(sol: ComposedSolution) -> bool:
    return all(v == ZERO for k, v in sol.coefficients.items() if k != "g0")


def _bindings(config: RunConfig, aux: AuxEquation, aux_sol: AuxSolution) -> dict:
    """Aux parameters default to 1 (figure captions); ``mu`` comes from the config."""
    wanted = (aux.parameters | aux_sol.z.free_symbols) & set(AUX_PARAMETERS)
    params = dict(config.params)
    defaulted = sorted(n for n in wanted if n not in params)
    for name in defaulted:
        params[name] = DEFAULT_PARAMS[name]
    if defaulted:
        logger.info("defaulted %s to 1", ", ".join(defaulted))
    params.setdefault("mu", config.mu)
    return params


def _bind_system(system: CoeffSystem, params: dict) -> CoeffSystem:
    used = {k: v for k, v in params.items() if k in system.parameters or k == "c"}
    bound = system.bind(used)
    if "c" in used:
        bound = dataclasses.replace(bound, unknowns=tuple(u for u in bound.unknowns if u != "c"))
    return bound


def build_system(config: RunConfig) -> tuple[PDEProblem, TravellingODE, BalanceResult, CoeffSystem]:
    problem = b_equation(config.b)
    ode = reduce_travelling(problem, config.mode)
    result = balance(ode, config.order)
    aux, _ = resolve_aux(config.aux_case)
    system = derive_system(ode, Ansatz(result.order), aux, config.aux_case)
    return problem, ode, result, system


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run the method for ``config``.

    Raises UnsolvedError (after exporting the system when ``out_dir`` is set)
    if the constant strategy finds no assignment.
    """
    logger.info("pipeline: b=%s aux case %s, %s reduction", config.b, config.aux_case, config.mode)
    problem, ode, bal, system = build_system(config)
    aux, aux_sol = resolve_aux(config.aux_case)
    params = _bindings(config, aux, aux_sol)
    result = PipelineResult(config, problem, ode, bal, system)
    out_dir = config.out_dir

    if config.mode == "paper-eq8" and config.aux_case == "1":
        result.cross_check = case1_cross_check(
            {k: v for k, v in params.items() if k not in ("C1",)}, system=system, quad=config.quad
        )
        if out_dir is not None:
            write_cross_check(result.cross_check, out_dir)

    if config.strategy == "export":
        if out_dir is not None:
            result.export_path = export_system(system, out_dir)
        result.status = "exported"
        _write(result)
        return result

    bound = _bind_system(system, params)
    logger.info("pipeline: solving %d equations (%s)", len(bound.equations), config.strategy)
    try:
        result.solve = solve_system(
            bound, config.strategy, out_dir, config.solver_tol, seed=config.seed
        )
    except UnsolvedError as err:
        result.status = "unsolved"
        result.export_path = err.export_path
        _write(result)
        raise
    if config.strategy == "pointwise":
        result.status = "pointwise"
        _write(result)
        return result

    target = problem if config.verify_pde else None
    for assignment in result.solve.assignments:
        values = assignment.real_values()
        c = values.get("c", params.get("c"))
        sol = compose(values, aux_sol, c, params["mu"], order=bal.order)
        result.records.append(_verify(config, ode, target, sol, params))
    result.status = "solved"
    _write(result)
    return result


def _verify(
    config: RunConfig,
    ode: TravellingODE,
    problem: PDEProblem | None,
    sol: ComposedSolution,
    params: dict,
) -> SolutionRecord:
    record = SolutionRecord(sol)
    bound = {k: v for k, v in params.items() if k not in ("c", "mu")}
    concrete = ComposedSolution(
        subs(sol.u, bound), sol.coefficients, sol.aux, sol.c, sol.mu, sol.provenance
    )
    try:
        record.ode_report = verify_solution(
            ode,
            concrete,
            {},
            config.interval,
            config.npoints,
            config.tol,
            threshold=config.threshold,
            quad=config.quad,
        )
        if problem is not None:
            record.pde_report = verify_solution(
                problem,
                concrete,
                {},
                config.interval,
                config.npoints,
                config.pde_tol,
                t_interval=config.t_interval,
                t_points=config.t_points,
                threshold=config.threshold,
                quad=config.quad,
            )
    except AuxwaveError as err:
        logger.warning("verification of %s failed: %s", sol.u, err)
        record.error = str(err)
    return record


def _write(result: PipelineResult):
    if result.config.out_dir is None:
        return
    path = write_json_atomic(result.config.out_dir / "result.json", result.to_dict())
    logger.info("pipeline: wrote %s", path)


def reduced_case1_config(**overrides) -> RunConfig:
    """The A = 0 reduction of Case 1 with B = 1 and mu = 1, constant strategy."""
    base = {"aux_case": "case1-reduced", "params": {"B": 1, "C1": 1}}
    base.update(overrides)
    return RunConfig(command="pipeline", **base)
