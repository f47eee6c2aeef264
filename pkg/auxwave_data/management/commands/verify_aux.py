"""
Verify a solution of the auxiliary equation z' = P z + Q z^n on a grid.

Usage:
    python manage.py verify_aux --case 4 --params A=1,B=-1,C1=1 --interval -5 5
    python manage.py verify_aux --case 3 --printed --params A=1,B=1,C=1,C1=1
    python manage.py verify_aux --P "A" --Q "B" --n 3 --params A=1,B=-1,C1=2 --interval -3 0
    python manage.py verify_aux --classical 1 -1 2

With --P/--Q and no --z the general solution is built by integrating factor.
"""

import logging

from django.core.management.base import CommandError

from auxwave.bernoulli import (
    AuxEquation,
    AuxSolution,
    ClassicalBernoulli,
    classical_solution,
    solve_general,
    verify_aux,
)
from auxwave.catalog import catalog_entry
from auxwave.config import AUX_CASES, parse_value
from auxwave.outputs import dumps_json, write_json_atomic
from auxwave.parser import parse
from auxwave.pipeline import resolve_aux
from auxwave_data.management.base import (
    EXIT_FAILED,
    AuxwaveCommand,
    engine_errors,
    store_verification,
    usage_error,
)

logger = logging.getLogger(__name__)


class Command(AuxwaveCommand):
    help = "Check z' - P z - Q z^n = 0 for a catalog case, a given equation or a classical solution"

    def add_arguments(self, parser):
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument("--case", type=str, choices=AUX_CASES, help="Catalog case")
        target.add_argument("--P", dest="P", type=str, help="P(xi) of a user equation")
        target.add_argument(
            "--classical",
            nargs=3,
            metavar=("A", "B", "K"),
            help="Classical z' = a z + b z^k with constant a, b",
        )
        parser.add_argument("--Q", dest="Q", type=str, help="Q(xi) of a user equation")
        parser.add_argument("--n", type=int, default=2, help="Exponent of the user equation")
        parser.add_argument("--z", type=str, default=None, help="Candidate solution z(xi)")
        parser.add_argument(
            "--printed", action="store_true", help="Check the catalog row as printed"
        )
        parser.add_argument("--branch", choices=["I", "II"], default="I")
        parser.add_argument(
            "--derivative",
            choices=["symbolic", "numeric"],
            default=None,
            help="How z' is obtained (default: numeric when z holds integrals, else symbolic)",
        )
        parser.add_argument("--json", action="store_true", help="Print the report as JSON")
        parser.add_argument("--out", type=str, default=None, help="Write the report JSON here")
        self.add_grid_arguments(parser)
        self.add_store_arguments(parser)

    def handle(self, *args, **options):
        config = self.run_config(options, "verify_aux")
        with engine_errors():
            kind, eq, z, case_index = self._target(options)
            report = verify_aux(
                eq,
                z,
                config.params,
                config.interval,
                config.npoints,
                config.tol,
                derivative=options["derivative"],
                threshold=config.threshold,
                quad=config.quad,
            )
        logger.info("verify_aux %s: %s", eq, report.summary())

        if options["out"]:
            write_json_atomic(options["out"], report.to_dict())
        if options["json"]:
            self.stdout.write(dumps_json(report.to_dict()), ending="")
        else:
            self.stdout.write(str(eq))
            self.stdout.write(f"z = {z}")
            if report.complex_evaluation:
                self.stdout.write(self.style.WARNING("evaluated with complex intermediates"))
            style = self.style.SUCCESS if report.passed else self.style.ERROR
            self.stdout.write(style(report.summary()))

        if not options["no_store"]:
            store_verification(kind, report, config, z, case_index)
        if not report.passed:
            raise CommandError("verification failed", returncode=EXIT_FAILED)

    def _target(self, options):
        if options["case"]:
            case = options["case"]
            if options["printed"]:
                if case == "case1-reduced":
                    raise usage_error("--printed needs a numbered case")
                entry = catalog_entry(int(case))
                eq, sol = entry.printed_equation, entry.printed_solution
            else:
                eq, sol = resolve_aux(case)
            z = parse(options["z"]) if options["z"] else sol.z
            index = None if case == "case1-reduced" else int(case)
            return "aux", eq, z, index
        if options["classical"]:
            a, b, k = options["classical"]
            try:
                k = int(k)
            except ValueError:
                raise usage_error(f"k must be an integer, got {k!r}") from None
            cb = ClassicalBernoulli(parse_value(a), parse_value(b), k)
            return "classical", cb.equation(), classical_solution(cb, options["branch"]), None
        if not options["Q"]:
            raise usage_error("--P needs --Q")
        eq = AuxEquation(parse(options["P"]), parse(options["Q"]), options["n"])
        sol = AuxSolution(parse(options["z"]), constant=None) if options["z"] else solve_general(eq)
        return "aux", eq, sol.z, None
