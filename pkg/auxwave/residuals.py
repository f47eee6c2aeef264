"""Residual reports over sample grids."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from auxwave.exceptions import VerificationError
from auxwave.expr import Expr, Symbol
from auxwave.numeric import Evaluator, QuadratureSpec, pole_scan, realness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExcludedPoint:
    point: float | tuple[float, ...]
    reason: str


@dataclass
class ResidualReport:
    """Outcome of evaluating a residual on a grid.

    ``max_abs`` and ``mean_abs`` are over ``|sum of terms|`` and ``passed`` is
    ``max_abs <= tolerance``. ``max_scaled`` is the largest
    ``|sum of terms| / max(1, max_j |term_j|)``, a cancellation diagnostic only.
    """

    max_abs: float
    mean_abs: float
    worst_point: float | tuple[float, ...]
    tolerance: float
    passed: bool
    npoints: int
    max_scaled: float
    complex_evaluation: bool
    per_term: dict[str, float] = field(default_factory=dict)
    excluded_points: list[ExcludedPoint] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["worst_point"] = _plain(self.worst_point)
        data["excluded_points"] = [
            {"point": _plain(p.point), "reason": p.reason} for p in self.excluded_points
        ]
        return data

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} max={self.max_abs:.3e} mean={self.mean_abs:.3e} "
            f"tol={self.tolerance:.1e} at {_plain(self.worst_point)} "
            f"({len(self.excluded_points)} excluded of {self.npoints})"
        )


def _plain(point):
    if isinstance(point, tuple):
        return [float(p) for p in point]
    return float(point)


def report_from_values(
    labels: Sequence[str],
    values: np.ndarray,
    points: Sequence,
    excluded: Mapping[int, str],
    tolerance: float,
) -> ResidualReport:
    """Build a report from term values of shape ``(len(labels), len(points))``."""
    values = np.asarray(values, dtype=complex)
    keep = np.array([i not in excluded for i in range(len(points))], dtype=bool)
    finite = np.all(np.isfinite(values), axis=0)
    excluded = dict(excluded)
    for i in np.flatnonzero(keep & ~finite):
        excluded[int(i)] = "non-finite residual term"
    keep &= finite
    excluded_points = [ExcludedPoint(points[i], reason) for i, reason in sorted(excluded.items())]
    if not np.any(keep):
        raise VerificationError(f"all {len(points)} grid points were excluded")

    kept = values[:, keep]
    total = np.abs(kept.sum(axis=0))
    scale = np.maximum(1.0, np.abs(kept).max(axis=0))
    worst = int(np.argmax(total))
    kept_points = [p for p, k in zip(points, keep, strict=True) if k]
    max_abs = float(total[worst])
    report = ResidualReport(
        max_abs=max_abs,
        mean_abs=float(total.mean()),
        worst_point=kept_points[worst],
        tolerance=tolerance,
        passed=max_abs <= tolerance,
        npoints=len(points),
        max_scaled=float((total / scale).max()),
        complex_evaluation=not realness(kept),
        per_term={label: float(np.abs(row).max()) for label, row in zip(labels, kept, strict=True)},
        excluded_points=excluded_points,
    )
    logger.info("residual: %s", report.summary())
    return report


def residual_on_grid(
    terms: Mapping[str, Expr | np.ndarray],
    var: Symbol,
    grid: np.ndarray,
    bindings: Mapping[str, object],
    tolerance: float,
    threshold: float = 1e-6,
    watch: Sequence[Expr] = (),
    quad: QuadratureSpec | None = None,
) -> ResidualReport:
    """Evaluate residual terms on a one-dimensional grid.

    Terms given as arrays are taken as already evaluated. Every expression term
    and every ``watch`` expression takes part in the pole scan.
    """
    grid = np.asarray(grid, dtype=float)
    ev = Evaluator({**bindings, var.name: grid}, quad)
    exprs = [t for t in terms.values() if isinstance(t, Expr)] + list(watch)
    excluded = pole_scan(ev, exprs, grid.size, threshold)
    for i, reason in sorted(excluded.items()):
        logger.debug("excluded %s=%.17g: %s", var.name, grid[i], reason)
    rows = [
        np.broadcast_to(ev(t) if isinstance(t, Expr) else np.asarray(t, dtype=complex), grid.shape)
        for t in terms.values()
    ]
    points = [float(x) for x in grid]
    return report_from_values(list(terms), np.array(rows), points, excluded, tolerance)
