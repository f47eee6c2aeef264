"""
Shared plumbing for the auxwave management commands.

Commands read the ``AUXWAVE_*`` settings, merge them with their options into an
``auxwave.config.RunConfig`` and map engine exceptions onto stable exit codes:

    0  success / verification passed
    1  verification failed
    2  usage error (bad options, parameters, expressions, catalog index)
    3  numeric failure (evaluation, quadrature, no solution found)
"""

import logging
from contextlib import contextmanager
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from auxwave.config import RunConfig, format_value, parse_bindings, parse_interval
from auxwave.exceptions import (
    AuxwaveError,
    CatalogIndexError,
    ConfigError,
    ExpressionError,
    NoBalanceError,
    ReductionError,
    UnboundCoefficientError,
)
from auxwave.numeric import QuadratureSpec
from auxwave_data.models import CatalogCase, VerificationRun

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

USAGE_ERRORS = (
    ConfigError,
    ExpressionError,
    CatalogIndexError,
    ReductionError,
    NoBalanceError,
    UnboundCoefficientError,
)


def exit_code(err: AuxwaveError) -> int:
    """2 for usage errors; evaluation failures and unsolved systems give 3."""
    return EXIT_USAGE if isinstance(err, USAGE_ERRORS) else EXIT_NUMERIC


@contextmanager
def engine_errors():
    """Re-raise engine errors as CommandError carrying the exit code."""
    try:
        yield
    except AuxwaveError as err:
        code = exit_code(err)
        logger.debug("engine error (exit %d): %s", code, err)
        raise CommandError(str(err), returncode=code) from err


def usage_error(message):
    return CommandError(message, returncode=EXIT_USAGE)


def quadrature_from_settings() -> QuadratureSpec:
    return QuadratureSpec(
        rel_tol=settings.AUXWAVE_QUAD_RTOL,
        abs_tol=settings.AUXWAVE_QUAD_ATOL,
        max_subdivisions=settings.AUXWAVE_QUAD_MAXSUB,
    )


class AuxwaveCommand(BaseCommand):
    """Base command with the grid, tolerance and storage options."""

    def add_grid_arguments(self, parser):
        parser.add_argument(
            "--params",
            action="append",
            default=None,
            help="Parameter bindings name=value (repeatable or comma separated, complex a+bi)",
        )
        parser.add_argument(
            "--interval",
            nargs=2,
            default=None,
            metavar=("LO", "HI"),
            help="Sample interval (default: -5 5)",
        )
        parser.add_argument(
            "--npoints",
            type=int,
            default=None,
            help="Number of grid points (default: AUXWAVE_NPOINTS)",
        )
        parser.add_argument(
            "--tol", type=float, default=None, help="Residual tolerance (default: AUXWAVE_TOL)"
        )

    def add_store_arguments(self, parser):
        parser.add_argument(
            "--no-store", action="store_true", help="Do not record the run in the database"
        )

    def run_config(self, options, command, **extra) -> RunConfig:
        """Settings defaults, then command-line options, then ``extra``."""
        kwargs = {
            "command": command,
            "npoints": settings.AUXWAVE_NPOINTS,
            "tol": settings.AUXWAVE_TOL,
            "solver_tol": settings.AUXWAVE_SOLVER_TOL,
            "threshold": settings.AUXWAVE_POLE_THRESHOLD,
            "quad": quadrature_from_settings(),
        }
        with engine_errors():
            kwargs["params"] = parse_bindings(options.get("params"))
            if options.get("interval"):
                kwargs["interval"] = parse_interval(*options["interval"])
            if options.get("npoints") is not None:
                kwargs["npoints"] = options["npoints"]
            if options.get("tol") is not None:
                kwargs["tol"] = options["tol"]
            kwargs.update(extra)
            return RunConfig(**kwargs)

    def output_dir(self, options, *parts) -> Path:
        out = options.get("out")
        return Path(out) if out else Path(settings.AUXWAVE_OUTPUT_DIR, *parts)


def store_verification(kind, report, config, expression="", case_index=None):
    """Record a ResidualReport as a VerificationRun."""
    case = None
    if case_index is not None:
        case = CatalogCase.objects.filter(index=case_index).first()
    return VerificationRun.objects.create(
        kind=kind,
        case=case,
        expression=str(expression),
        parameters={k: format_value(v) for k, v in sorted(config.params.items())},
        interval_start=config.interval[0],
        interval_end=config.interval[1],
        npoints=report.npoints,
        tolerance=report.tolerance,
        max_residual=report.max_abs,
        mean_residual=report.mean_abs,
        passed=report.passed,
        excluded_count=len(report.excluded_points),
        complex_evaluation=report.complex_evaluation,
        report=report.to_dict(),
    )
