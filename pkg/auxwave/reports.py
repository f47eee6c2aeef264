"""
Reproduction reports.

The published Case-1 coefficient block and top equation are kept here as text
exactly as printed. They are never asserted against; the reports evaluate them
inside our own system and tabulate what comes out.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from auxwave.bernoulli import verify_aux
from auxwave.catalog import CATALOG, DEFAULT_PARAMS, catalog_entry
from auxwave.exceptions import AuxwaveError, ConfigError
from auxwave.expr import XI, ZERO, Expr, expand, subs
from auxwave.numeric import Evaluator, QuadratureSpec, find_pole_free_interval
from auxwave.outputs import write_csv_atomic, write_json_atomic
from auxwave.parser import parse
from auxwave.waves import Ansatz, CoeffSystem, b_equation, derive_system, reduce_travelling

logger = logging.getLogger(__name__)

_G2_NUMERATOR = (
    "27*c*B^4 - c*A^2*xi^2 + 4*c*A^6*xi^6 + g0*A^2*xi^2 + 4*g0*A^6*xi^6 - 2*c*A*xi*B"
    " + 60*c*A^4*xi^4*B^2 + 80*c*A^3*xi^3*B^3 + 60*c*A^2*xi^2*B^4 + 24*c*A*xi*B^5"
    " + 2*g0*A*xi*B + 60*g0*A^4*xi^4*B^2 + 80*g0*A^3*xi^3*B^3 + 60*g0*A^2*xi^2*B^4"
    " + 24*g0*A*xi*B^5 + 22*c*A*B^2 + 36*c*A^2*B^2*xi + 22*c*A^3*xi^2 + 36*c*A^3*xi^2*B"
    " + 44*c*A^2*xi*B - c*B^2 + 4*c*B^6 + g0*B^2 + 4*g0*B^6 + 2*c*A^2 + 2*g0*A^2"
    " + 24*c*A^5*xi^5*B + 24*g0*A^5*xi^5*B + 27*g0*A^4*xi^4 + 9*g0*A*B + 9*g0*A^2*xi"
    " + g0*A*xi + 19*g0*A^5*xi^5 + 22*g0*A*B^2 + 22*g0*A^3*xi^2 + 12*c*A*B^3"
    " + 12*c*A^4*xi^3 - c*B + 36*g0*A^2*B^2*xi + 36*g0*A^3*xi^2*B + 27*c*A^4*xi^4"
    " + 9*c*A*B + 9*c*A^2*xi + 19*c*A^5*xi^5 - c*A*xi + 12*g0*A*B^3 + 12*g0*A^4*xi^3"
    " + 108*c*A^3*xi^3*B + 162*c*A^2*xi^2*B^2 + 108*c*A*xi*B^3 + 95*c*A^4*xi^4*B"
    " + 190*c*A^3*xi^3*B^2 + 190*c*A^2*xi^2*B^3 + 95*c*A*xi*B^4 + 19*c*B^5 + g0*B"
    " + 19*g0*B^5 + 27*g0*B^4 + 108*g0*A^3*xi^3*B + 162*g0*A^2*xi^2*B^2 + 108*g0*A*xi*B^3"
    " + 95*g0*A^4*xi^4*B + 190*g0*A^3*xi^3*B^2 + 190*g0*A^2*xi^2*B^3 + 95*g0*A*xi*B^4"
    " + 44*g0*A^2*xi*B"
)
_G2_DENOMINATOR = (
    "8*A*B^3 + 2*A*xi*B + 24*A^2*B^2*xi + 24*A^3*xi^2*B + B^2 + 2*A^2 + 8*A^4*xi^3 + A^2*xi^2"
)

PRINTED_CASE1_G2 = f"-({_G2_NUMERATOR})/({_G2_DENOMINATOR})"
PRINTED_EQ6 = "-14*g2*A - 22*g2*A^3*xi^3 - 66*g2*A^2*xi^2*B - 66*g2*A*xi*B^2 - 22*g2*B^3"

CROSS_CHECK_PARAMS = {"A": Fraction(1, 4), "B": 1, "c": 1, "mu": 1, "g0": 0}
CROSS_CHECK_POINTS = tuple(np.linspace(-1.0, 1.0, 9))


def printed_case1_coefficients() -> dict[str, Expr]:
    """``g1 = 0`` and the printed ``g2``; ``g0`` stays free."""
    return {"g1": ZERO, "g2": parse(PRINTED_CASE1_G2)}


def _cplx(value: complex) -> dict | None:
    value = complex(value)
    if not np.isfinite(value):
        return None
    return {"re": value.real, "im": value.imag}


def top_index(system: CoeffSystem) -> int:
    """Highest power of z whose coefficient is not identically zero."""
    for i in range(len(system.equations) - 1, -1, -1):
        if expand(system.equations[i]) != ZERO:
            return i
    return 0


@dataclass
class CrossCheckReport:
    params: dict[str, str]
    top: int
    derived_top: str
    printed_top: str
    rows: list[dict] = field(default_factory=list)
    top_rows: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "params": dict(sorted(self.params.items())),
            "top": self.top,
            "derived_top": self.derived_top,
            "printed_top": self.printed_top,
            "rows": self.rows,
            "top_rows": self.top_rows,
        }

    def max_abs(self) -> float:
        values = [r["max_abs"] for r in self.rows if r["max_abs"] is not None]
        return max(values, default=float("nan"))


def case1_cross_check(
    params: Mapping[str, object] | None = None,
    xi_points: Sequence[float] = CROSS_CHECK_POINTS,
    system: CoeffSystem | None = None,
    quad: QuadratureSpec | None = None,
) -> CrossCheckReport:
    """Evaluate the printed Case-1 coefficients inside the printed-reduction system.

    Every row holds the value of each equation at one ``xi``; a true solution
    would give zeros throughout. ``top_rows`` compares our top equation with
    the printed one point by point.
    """
    params = {**CROSS_CHECK_PARAMS, **(params or {})}
    if system is None:
        ode = reduce_travelling(b_equation(-2), "paper-eq8")
        system = derive_system(ode, Ansatz(2), catalog_entry(1).equation, "1")
    coefficients = printed_case1_coefficients()
    equations = [subs(e, coefficients) for e in system.equations]
    printed = subs(parse(PRINTED_EQ6), coefficients)
    needed = set().union(*(e.free_symbols for e in equations), printed.free_symbols) - {XI.name}
    missing = needed - set(params)
    if missing:
        raise ConfigError(f"cross-check parameters not bound: {', '.join(sorted(missing))}")

    grid = np.asarray(xi_points, dtype=float)
    ev = Evaluator({**params, XI.name: grid}, quad)
    values = np.array([np.broadcast_to(ev(e), grid.shape) for e in equations])
    top = top_index(system)
    printed_values = np.broadcast_to(ev(printed), grid.shape)

    report = CrossCheckReport(
        params={k: str(v) for k, v in params.items()},
        top=top,
        derived_top=str(system.equations[top]),
        printed_top=PRINTED_EQ6,
    )
    for k, xi in enumerate(grid):
        column = values[:, k]
        finite = np.isfinite(column)
        report.rows.append(
            {
                "xi": float(xi),
                "equations": [_cplx(v) for v in column],
                "max_abs": float(np.abs(column[finite]).max()) if finite.any() else None,
            }
        )
        derived, shown = complex(values[top, k]), complex(printed_values[k])
        ratio = derived / shown if shown != 0 else complex("nan")
        report.top_rows.append(
            {
                "xi": float(xi),
                "derived": _cplx(derived),
                "printed": _cplx(shown),
                "ratio": _cplx(ratio),
            }
        )
    logger.info("case-1 cross-check: max |eq_i| = %.3e over %d points", report.max_abs(), grid.size)
    return report


def write_cross_check(report: CrossCheckReport, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    path = write_json_atomic(out_dir / "cross_check.json", report.to_dict())
    header = ["xi"] + [f"abs_eq{i}" for i in range(len(report.rows[0]["equations"]))]
    rows = []
    for row in report.rows:
        cells = [row["xi"]]
        for v in row["equations"]:
            cells.append(float("nan") if v is None else float(abs(complex(v["re"], v["im"]))))
        rows.append(cells)
    write_csv_atomic(out_dir / "cross_check.csv", header, rows)
    return path


# Catalog errata


def errata_report(
    params: Mapping[str, object] | None = None,
    npoints: int = 101,
    tol: float = 1e-8,
    quad: QuadratureSpec | None = None,
) -> list[dict]:
    """Verify the printed and the consistent form of every row carrying an erratum."""
    params = {**DEFAULT_PARAMS, **(params or {})}
    out = []
    for entry in CATALOG:
        if not entry.has_erratum:
            continue
        z = subs(entry.solution.z, params)
        interval = find_pole_free_interval(z, XI.name, {}, quad=quad)
        row = {"index": entry.index, "erratum": entry.erratum, "interval": list(interval)}
        for label, eq, sol in (
            ("consistent", entry.equation, entry.solution),
            ("printed", entry.printed_equation, entry.printed_solution),
        ):
            try:
                report = verify_aux(eq, sol, params, interval, npoints, tol, quad=quad)
            except AuxwaveError as err:
                row[label] = {"passed": False, "error": str(err)}
            else:
                row[label] = {"passed": report.passed, "max_abs": report.max_abs}
        logger.info(
            "case %d: consistent %s, printed %s",
            entry.index,
            row["consistent"]["passed"],
            row["printed"]["passed"],
        )
        out.append(row)
    return out
