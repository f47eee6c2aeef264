"""
Emit curve data (CSV) for figures.

Usage:
    python manage.py sample --recipe docs/recipes/figure1.cfg --out output/figures
    python manage.py sample --recipe-dir docs/recipes
    python manage.py sample --expr-file curve.txt --params A=1 --interval -5 5 --out curve.csv
    python manage.py sample --solution-file wave.json --t-interval 0 1 --out wave.csv

A solution file holds one JSON object with ``u``, ``c`` and ``mu`` as expression
text (the ``solution`` entries of result.json have this shape).
"""

import json
import logging
from pathlib import Path

import jsonschema
from django.conf import settings

from auxwave.config import Recipe, load_recipe
from auxwave.exceptions import ConfigError
from auxwave.figures import (
    run_recipe,
    sample_recipe,
    sample_solution,
    solution_from_dict,
    write_figure,
)
from auxwave_data.management.base import (
    AuxwaveCommand,
    engine_errors,
    quadrature_from_settings,
    usage_error,
)

logger = logging.getLogger(__name__)

SOLUTION_SCHEMA = Path(settings.BASE_DIR) / "schemas" / "solution.schema.json"


class Command(AuxwaveCommand):
    help = "Sample recipes, expressions or composed solutions into CSV files"

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--recipe", action="append", help="Recipe file (repeatable)")
        source.add_argument("--recipe-dir", type=str, help="Sample every *.cfg in this directory")
        source.add_argument("--expr-file", type=str, help="File holding an expression in xi")
        source.add_argument("--solution-file", type=str, help="JSON composed solution")
        parser.add_argument(
            "--t-interval",
            nargs=2,
            type=float,
            default=None,
            help="Sample u(x, t) on this time interval (solution files)",
        )
        parser.add_argument("--t-points", type=int, default=11)
        parser.add_argument(
            "--out",
            type=str,
            default=None,
            help="CSV file (single curve) or directory (recipes); default AUXWAVE_OUTPUT_DIR",
        )
        self.add_grid_arguments(parser)

    def handle(self, *args, **options):
        quad = quadrature_from_settings()
        if options["recipe"] or options["recipe_dir"]:
            self._recipes(options, quad)
            return
        config = self.run_config(options, "sample")
        with engine_errors():
            if options["expr_file"]:
                path = Path(options["expr_file"])
                text = self._read(path).strip()
                recipe = Recipe(
                    name=path.stem,
                    kind="expression",
                    expr=text,
                    params=config.params,
                    interval=config.interval,
                    npoints=config.npoints,
                )
                data = sample_recipe(recipe, quad)
            else:
                path = Path(options["solution_file"])
                sol = solution_from_dict(self._solution(path))
                data = sample_solution(
                    path.stem,
                    sol,
                    config.interval,
                    config.npoints,
                    tuple(options["t_interval"]) if options["t_interval"] else None,
                    options["t_points"],
                    quad=quad,
                )
            out = options["out"] or Path(settings.AUXWAVE_OUTPUT_DIR) / f"{path.stem}.csv"
            write_figure(data, out)
        self._summary(data)

    def _recipes(self, options, quad):
        if options["recipe_dir"]:
            paths = sorted(Path(options["recipe_dir"]).glob("*.cfg"))
            if not paths:
                raise usage_error(f"no *.cfg recipes in {options['recipe_dir']}")
        else:
            paths = [Path(p) for p in options["recipe"]]
        out_dir = self.output_dir(options, "figures")
        with engine_errors():
            recipes = [load_recipe(p) for p in paths]
            for recipe in recipes:
                self.stdout.write(f"Sampling {recipe.name} ({recipe.kind})...")
                self._summary(run_recipe(recipe, out_dir, quad))

    def _summary(self, data):
        summary = data.summary()
        style = self.style.SUCCESS if summary["finite"] else self.style.WARNING
        note = "" if summary["real"] else ", complex values"
        self.stdout.write(
            style(
                f"{data.name}: {summary['rows']} rows, {summary['excluded']} excluded{note}"
                f" -> {summary['path']}"
            )
        )

    def _read(self, path):
        try:
            return path.read_text(encoding="utf-8")
        except OSError as err:
            raise ConfigError(f"cannot read {path}: {err}") from err

    def _solution(self, path):
        try:
            data = json.loads(self._read(path))
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: not JSON ({err})") from err
        schema = json.loads(SOLUTION_SCHEMA.read_text(encoding="utf-8"))
        try:
            jsonschema.validate(data, schema)
        except jsonschema.ValidationError as err:
            raise ConfigError(f"{path}: {err.message}") from err
        return data
