"""
Tabulate both classical Bernoulli branches over a sign grid of (a, b, k).

Usage:
    python manage.py classical_sweep
    python manage.py classical_sweep --values -1 1 --ks 2 3 --out output/sweep.csv
"""

from auxwave.bernoulli import classical_sweep
from auxwave.outputs import write_csv_atomic
from auxwave_data.management.base import AuxwaveCommand, engine_errors

COLUMNS = ["a", "b", "k", "branch", "sign_condition", "max_abs", "passed", "excluded", "error"]


class Command(AuxwaveCommand):
    help = "Residuals of the classical solutions z' = a z + b z^k, branch I and II"

    def add_arguments(self, parser):
        parser.add_argument("--values", nargs="+", type=float, default=[-1.0, 1.0])
        parser.add_argument("--ks", nargs="+", type=int, default=[2, 3])
        parser.add_argument("--out", type=str, default=None, help="Write the table as CSV")
        self.add_grid_arguments(parser)

    def handle(self, *args, **options):
        config = self.run_config(options, "classical_sweep")
        with engine_errors():
            rows = classical_sweep(
                tuple(options["values"]),
                tuple(options["ks"]),
                config.interval,
                config.npoints,
                options["tol"] if options["tol"] is not None else 1e-9,
            )
        for row in rows:
            residual = "-" if row.max_abs is None else f"{row.max_abs:.2e}"
            style = self.style.SUCCESS if row.passed else self.style.WARNING
            condition = "sign condition" if row.sign_condition else ""
            self.stdout.write(
                style(
                    f"k={row.k} a={row.a:+g} b={row.b:+g} branch {row.branch:<2} "
                    f"max={residual:>9} {condition}"
                )
            )
        passed = sum(r.passed for r in rows if r.branch == "I")
        total = sum(1 for r in rows if r.branch == "I")
        self.stdout.write(f"Branch I: {passed}/{total} pass; branch II is tabulated only")
        if options["out"]:
            table = [[getattr(r, c) for c in COLUMNS] for r in rows]
            path = write_csv_atomic(options["out"], COLUMNS, table)
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(rows)} rows to {path}"))
