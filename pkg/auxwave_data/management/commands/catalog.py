"""
Inspect the auxiliary-equation catalog.

Usage:
    python manage.py catalog list
    python manage.py catalog show 4 [--json]
    python manage.py catalog export --out catalog.json
    python manage.py catalog errata [--out errata.json]
"""

import json

from auxwave.catalog import CATALOG, catalog_entry, export_catalog_json
from auxwave.outputs import dumps_json, write_json_atomic, write_text_atomic
from auxwave.reports import errata_report
from auxwave_data.management.base import (
    AuxwaveCommand,
    engine_errors,
    quadrature_from_settings,
    usage_error,
)


class Command(AuxwaveCommand):
    help = "List, show, export or check the 20 catalog cases of z' = P z + Q z^2"

    def add_arguments(self, parser):
        parser.add_argument("action", choices=["list", "show", "export", "errata"])
        parser.add_argument("index", nargs="?", type=int, help="Case number for 'show'")
        parser.add_argument("--json", action="store_true", help="Print JSON instead of text")
        parser.add_argument("--out", type=str, default=None, help="Write JSON to this file")
        parser.add_argument(
            "--npoints", type=int, default=101, help="Grid size for 'errata' (default: 101)"
        )

    def handle(self, *args, **options):
        action = options["action"]
        if action == "show" and options["index"] is None:
            raise usage_error("catalog show needs a case number")
        with engine_errors():
            getattr(self, f"_{action}")(options)

    def _list(self, options):
        if options["json"]:
            self.stdout.write(export_catalog_json(), ending="")
            return
        for entry in CATALOG:
            mark = " *" if entry.has_erratum else ""
            self.stdout.write(
                f"{entry.index:>2}  P = {entry.P:<28} Q = {entry.Q:<28} "
                f"[{entry.solution.form}]{mark}"
            )
        self.stdout.write("* printed row differs from the transcription used (see 'errata')")

    def _show(self, options):
        entry = catalog_entry(options["index"])
        if options["json"]:
            self.stdout.write(dumps_json(entry.describe()), ending="")
            return
        self.stdout.write(f"Case {entry.index}")
        self.stdout.write(f"  P = {entry.P}")
        self.stdout.write(f"  Q = {entry.Q}")
        self.stdout.write(f"  z = {entry.z}")
        self.stdout.write(f"  form: {entry.solution.form}")
        if entry.notes:
            self.stdout.write(f"  notes: {entry.notes}")
        if entry.has_erratum:
            self.stdout.write(self.style.WARNING(f"  erratum: {entry.erratum}"))

    def _export(self, options):
        text = export_catalog_json()
        if options["out"]:
            path = write_text_atomic(options["out"], text)
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(CATALOG)} cases to {path}"))
        else:
            self.stdout.write(text, ending="")

    def _errata(self, options):
        rows = errata_report(
            npoints=options["npoints"],
            tol=self.run_config(options, "catalog").tol,
            quad=quadrature_from_settings(),
        )
        for row in rows:
            consistent = "pass" if row["consistent"]["passed"] else "FAIL"
            printed = "pass" if row["printed"]["passed"] else "fail"
            self.stdout.write(
                f"Case {row['index']:>2}: transcription {consistent}, printed {printed}"
                f" - {row['erratum']}"
            )
        if options["out"]:
            path = write_json_atomic(options["out"], rows)
            self.stdout.write(self.style.SUCCESS(f"Wrote errata report to {path}"))
        elif options["json"]:
            self.stdout.write(json.dumps(rows, indent=2, sort_keys=True))
