"""
Run configuration and recipe files.

Values on the command line and in recipes share one syntax: integers,
rationals (``1/4``), decimals (``0.25``, ``1e-3``) and complex numbers written
``a+bi``. Reals become exact ``Fraction`` values so that ``A=1/4`` stays exactly
a quarter through symbolic substitution.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from auxwave.exceptions import ConfigError
from auxwave.numeric import DEFAULT_QUADRATURE, QuadratureSpec

logger = logging.getLogger(__name__)

REDUCTION_MODES = ("mechanical", "paper-eq8")
STRATEGIES = ("constant", "pointwise", "export")
AUX_CASES = tuple(str(k) for k in range(1, 21)) + ("case1-reduced",)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Number = Fraction | complex


def parse_value(text: str) -> Number:
    """``"1/4"`` -> Fraction(1, 4); ``"1+2i"`` -> (1+2j)."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise ConfigError("empty value")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    if s.endswith(("i", "j")):
        try:
            value = complex(s[:-1] + "j")
        except ValueError:
            raise ConfigError(f"cannot parse value {text!r}") from None
        return Fraction(value.real) if value.imag == 0 else value
    raise ConfigError(f"cannot parse value {text!r}")


def parse_bindings(items: str | Iterable[str] | None) -> dict[str, Number]:
    """Parse ``"A=1,B=-1"`` (or a list of ``name=value`` items)."""
    if items is None:
        return {}
    if isinstance(items, str):
        items = [items]
    out: dict[str, Number] = {}
    for chunk in items:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, value = item.partition("=")
            name = name.strip()
            if not sep or not _NAME.match(name):
                raise ConfigError(f"expected name=value, got {item!r}")
            if name in out:
                raise ConfigError(f"parameter {name} given twice")
            out[name] = parse_value(value)
    return out


def parse_interval(lo, hi) -> tuple[float, float]:
    a, b = float(parse_value(lo).real), float(parse_value(hi).real)
    if not a < b:
        raise ConfigError(f"empty interval [{a:g}, {b:g}]")
    return a, b


def format_value(value: Number) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return f"{value.real:.17g}{value.imag:+.17g}i"


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one command run."""

    command: str = "run"
    params: Mapping[str, Number] = field(default_factory=dict)
    interval: tuple[float, float] = (-5.0, 5.0)
    npoints: int = 101
    tol: float = 1e-8
    solver_tol: float = 1e-10
    pde_tol: float = 1e-5
    threshold: float = 1e-6
    quad: QuadratureSpec = DEFAULT_QUADRATURE
    mode: str = "mechanical"
    strategy: str = "constant"
    b: Number | None = Fraction(-2)
    aux_case: str = "4"
    order: int | None = None
    mu: Number = Fraction(1)
    verify_pde: bool = False
    t_interval: tuple[float, float] = (0.0, 1.0)
    t_points: int = 5
    seed: int = 0
    out_dir: Path | None = None

    def __post_init__(self):
        for label in ("tol", "solver_tol", "pde_tol", "threshold"):
            if not getattr(self, label) > 0:
                raise ConfigError(f"{label} must be positive")
        if not isinstance(self.npoints, int) or self.npoints < 2:
            raise ConfigError(f"npoints must be an integer >= 2, got {self.npoints!r}")
        if not isinstance(self.t_points, int) or self.t_points < 1:
            raise ConfigError(f"t_points must be a positive integer, got {self.t_points!r}")
        for label in ("interval", "t_interval"):
            lo, hi = getattr(self, label)
            if not lo < hi and not (label == "t_interval" and lo == hi):
                raise ConfigError(f"empty {label} [{lo:g}, {hi:g}]")
        if self.mode not in REDUCTION_MODES:
            raise ConfigError(f"unknown reduction mode {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if str(self.aux_case) not in AUX_CASES:
            raise ConfigError(f"unknown aux case {self.aux_case!r}")
        object.__setattr__(self, "aux_case", str(self.aux_case))
        if self.order is not None and (not isinstance(self.order, int) or self.order < 1):
            raise ConfigError(f"order must be a positive integer, got {self.order!r}")
        for name in self.params:
            if not _NAME.match(name):
                raise ConfigError(f"bad parameter name {name!r}")
        if self.out_dir is not None:
            object.__setattr__(self, "out_dir", Path(self.out_dir))

    def describe(self) -> dict:
        return {
            "command": self.command,
            "params": {k: format_value(v) for k, v in sorted(self.params.items())},
            "interval": list(self.interval),
            "npoints": self.npoints,
            "tol": self.tol,
            "mode": self.mode,
            "strategy": self.strategy,
            "b": None if self.b is None else format_value(self.b),
            "aux_case": self.aux_case,
        }


# Recipes

RECIPE_KINDS = ("expression", "aux", "classical", "composed")
RECIPE_KEYS = frozenset(
    {
        "name",
        "kind",
        "expr",
        "case",
        "params",
        "interval",
        "npoints",
        "a",
        "b",
        "k",
        "xi0",
        "branch",
        "coefficients",
        "c",
        "mu",
        "t_interval",
        "t_points",
        "out",
    }
)


@dataclass(frozen=True)
class Recipe:
    """One figure: what to sample, where and with which parameters."""

    name: str
    kind: str
    params: Mapping[str, Number] = field(default_factory=dict)
    interval: tuple[float, float] = (-5.0, 5.0)
    npoints: int = 201
    expr: str | None = None
    case: str | None = None
    a: Number | None = None
    b: Number | None = None
    k: int = 2
    xi0: Number = Fraction(0)
    branch: str = "I"
    coefficients: str = "solve"
    c: Number | None = None
    mu: Number = Fraction(1)
    t_interval: tuple[float, float] | None = None
    t_points: int = 11
    out: str | None = None

    def __post_init__(self):
        if self.kind not in RECIPE_KINDS:
            raise ConfigError(f"unknown recipe kind {self.kind!r}")
        if self.kind == "expression" and not self.expr:
            raise ConfigError("expression recipe needs expr")
        if self.kind in ("aux", "composed") and str(self.case) not in AUX_CASES:
            raise ConfigError(f"{self.kind} recipe needs case in 1..20 or case1-reduced")
        if self.kind == "classical" and (self.a is None or self.b is None):
            raise ConfigError("classical recipe needs a and b")
        if self.branch not in ("I", "II"):
            raise ConfigError(f"unknown branch {self.branch!r}")
        if self.npoints < 2:
            raise ConfigError("npoints must be >= 2")

    @property
    def filename(self) -> str:
        return self.out or f"{self.name}.csv"


def _interval_field(value: str) -> tuple[float, float]:
    parts = value.replace(",", " ").split()
    if len(parts) != 2:
        raise ConfigError(f"interval needs two numbers, got {value!r}")
    return parse_interval(*parts)


def _int_field(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def read_recipe_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read recipe {path}: {err}") from err
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        if key not in RECIPE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def load_recipe(path: str | Path) -> Recipe:
    raw = read_recipe_file(path)
    if "kind" not in raw:
        raise ConfigError(f"{path}: recipe has no kind")
    kwargs: dict[str, object] = {"name": raw.get("name", Path(path).stem), "kind": raw["kind"]}
    for key, value in raw.items():
        if key in ("name", "kind"):
            continue
        if key == "params":
            kwargs[key] = parse_bindings(value)
        elif key in ("interval", "t_interval"):
            kwargs[key] = _interval_field(value)
        elif key in ("npoints", "k", "t_points"):
            kwargs[key] = _int_field(value, key)
        elif key in ("a", "b", "xi0", "c", "mu"):
            kwargs[key] = parse_value(value)
        else:
            kwargs[key] = value
    recipe = Recipe(**kwargs)
    logger.debug("loaded recipe %s (%s)", recipe.name, recipe.kind)
    return recipe
