"""
Run the auxiliary-equation method on the b-equation.

Usage:
    python manage.py pipeline --b -2 --aux-case 4 --strategy constant
    python manage.py pipeline --b -2 --aux-case 1 --strategy export --out output/case1
    python manage.py pipeline --aux-case 1 --ode paper-eq8 --strategy pointwise \
        --params A=1/4,B=1,c=1,g0=0
    python manage.py pipeline --aux-case case1-reduced --params B=1,C1=1 --verify-pde

Writes result.json (plus system.txt/system.json and cross_check.* when they
apply) to --out, or to AUXWAVE_OUTPUT_DIR/pipeline.
"""

import logging

from django.conf import settings
from django.core.management.base import CommandError
from django.db import transaction

from auxwave.config import AUX_CASES, REDUCTION_MODES, STRATEGIES, format_value, parse_value
from auxwave.exceptions import UnsolvedError
from auxwave.pipeline import run_pipeline
from auxwave.waves import B_EQUATION
from auxwave_data.management.base import (
    EXIT_FAILED,
    AuxwaveCommand,
    engine_errors,
    store_verification,
)
from auxwave_data.models import PipelineRun

logger = logging.getLogger(__name__)


class Command(AuxwaveCommand):
    help = "Reduce the b-equation, balance, derive and solve the coefficient system, verify"

    def add_arguments(self, parser):
        parser.add_argument(
            "--pde",
            choices=["b-equation"],
            default="b-equation",
            help=f"PDE to solve (b-equation: {B_EQUATION} = 0)",
        )
        parser.add_argument("--b", type=str, default="-2", help="b-equation parameter")
        parser.add_argument("--aux-case", choices=AUX_CASES, default="4")
        parser.add_argument("--ode", choices=REDUCTION_MODES, default="mechanical")
        parser.add_argument("--strategy", choices=STRATEGIES, default="constant")
        parser.add_argument("--order", type=int, default=None, help="Override the balance N")
        parser.add_argument("--mu", type=str, default="1", help="Wave number mu")
        parser.add_argument(
            "--verify-pde", action="store_true", help="Also check each solution against the PDE"
        )
        parser.add_argument("--pde-tol", type=float, default=1e-5)
        parser.add_argument("--t-interval", nargs=2, type=float, default=(0.0, 1.0))
        parser.add_argument("--t-points", type=int, default=5)
        parser.add_argument("--seed", type=int, default=0, help="Seed of the pointwise sampler")
        parser.add_argument("--out", type=str, default=None, help="Output directory")
        self.add_grid_arguments(parser)
        self.add_store_arguments(parser)

    def handle(self, *args, **options):
        with engine_errors():
            config = self.run_config(
                options,
                "pipeline",
                b=parse_value(options["b"]),
                aux_case=options["aux_case"],
                mode=options["ode"],
                strategy=options["strategy"],
                order=options["order"],
                mu=parse_value(options["mu"]),
                verify_pde=options["verify_pde"],
                pde_tol=options["pde_tol"],
                t_interval=tuple(options["t_interval"]),
                t_points=options["t_points"],
                seed=options["seed"],
                out_dir=self.output_dir(options, "pipeline"),
            )
        self.stdout.write(
            f"b-equation with b = {format_value(config.b)}, aux case {config.aux_case}, "
            f"{config.mode} reduction, {config.strategy} strategy"
        )
        with engine_errors():
            try:
                result = run_pipeline(config)
            except UnsolvedError as err:
                self.stdout.write(self.style.WARNING(f"No constant assignment: {err}"))
                if err.export_path is not None:
                    self.stdout.write(f"System exported to {err.export_path}")
                if not options["no_store"]:
                    self._store_unsolved(config)
                raise

        self._report(result)
        if not options["no_store"]:
            self._store(result)
        if result.status == "solved" and not result.passed:
            raise CommandError("no solution passed verification", returncode=EXIT_FAILED)

    def _report(self, result):
        bal = result.balance
        self.stdout.write(f"Travelling ODE: {result.ode} = 0")
        self.stdout.write(f"Balance: N = {bal.order} (candidates {list(bal.candidates)})")
        self.stdout.write(
            f"System: {len(result.system.equations)} equations in "
            f"{', '.join(result.system.unknowns)}"
        )
        if result.cross_check is not None:
            cc = result.cross_check
            self.stdout.write(
                f"Cross-check: top equation z^{cc.top}, max |printed - derived| = {cc.max_abs():.3e}"
            )
        if result.export_path is not None:
            self.stdout.write(f"System exported to {result.export_path}")
        if result.status == "pointwise":
            report = result.solve.pointwise
            constant = sum(f.xi_independent for f in report.families)
            self.stdout.write(
                f"Pointwise solve: {len(report.families)} root families, "
                f"{constant} independent of xi"
            )
        for record in result.records:
            style = self.style.SUCCESS if record.passed else self.style.ERROR
            self.stdout.write(style(f"u = {record.solution.u}"))
            if record.ode_report is not None:
                self.stdout.write(f"  ODE: {record.ode_report.summary()}")
            if record.pde_report is not None:
                self.stdout.write(f"  PDE: {record.pde_report.summary()}")
            if record.error:
                self.stdout.write(self.style.WARNING(f"  {record.error}"))
        self.stdout.write(self.style.SUCCESS(f"Status: {result.status}"))

    def _base_fields(self, config):
        return {
            "pde": B_EQUATION,
            "b": "" if config.b is None else format_value(config.b),
            "aux_case": config.aux_case,
            "ode_mode": config.mode,
            "strategy": config.strategy,
            "output_dir": str(config.out_dir or settings.AUXWAVE_OUTPUT_DIR),
        }

    def _store_unsolved(self, config):
        PipelineRun.objects.create(
            status="unsolved", result={"config": config.describe()}, **self._base_fields(config)
        )

    @transaction.atomic
    def _store(self, result):
        config = result.config
        run = PipelineRun.objects.create(
            balance_order=result.balance.order,
            candidates=list(result.balance.candidates),
            equation_count=len(result.system.equations),
            status=result.status,
            passed=result.passed,
            result=result.to_dict(),
            **self._base_fields(config),
        )
        for record in result.records:
            for kind, report in (("ode", record.ode_report), ("pde", record.pde_report)):
                if report is not None:
                    run.verifications.add(
                        store_verification(kind, report, config, record.solution.u)
                    )
        logger.info("stored pipeline run %s", run.pk)
        return run
