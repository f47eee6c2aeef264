"""
The twenty closed-form and quadrature-form solutions of ``z' = P z + Q z^2``.

Each entry keeps two transcriptions: the printed one, exactly as published, and
the consistent one used for computation. They differ only where the printed row
does not solve its own equation (see ``erratum``). ``c1_scale``/``c1_shift``
relate the entry's constant to the one of :func:`auxwave.bernoulli.solve_general`:
``C1_general = c1_scale * C1 + c1_shift``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from auxwave.bernoulli import AuxEquation, AuxSolution
from auxwave.exceptions import CatalogIndexError
from auxwave.expr import Expr, add, has_integral, mul, subs
from auxwave.parser import parse

DEFAULT_PARAMS = {"A": 1, "B": 1, "C": 1, "C1": 1}

_GAUSS_19 = (
    "2*(-2*C)^(1/2)*exp((1/2)*C*xi^2 + B*xi)/("
    "A*pi^(1/2)*exp({s}(B + I)^2/(2*C))*erf((C*xi + B + I)/(-2*C)^(1/2))"
    " + A*pi^(1/2)*exp({s}(B - I)^2/(2*C))*erf((C*xi + B - I)/(-2*C)^(1/2))"
    " + 2*C1*(-2*C)^(1/2))"
)
_GAUSS_20 = (
    "{f}*(-2*C)^(1/2)*exp((1/2)*C*xi^2 + B*xi)/("
    "A*pi^(1/2)*exp({s}(B + I)^2/(2*C))*erf((C*xi + B + I)/(-2*C)^(1/2))"
    " - A*pi^(1/2)*exp({s}(B - I)^2/(2*C))*erf((C*xi + B - I)/(-2*C)^(1/2))"
    " + {c}*C1*(-2*C)^(1/2))"
)


def _quadrature(F: str, Q: str) -> str:
    return f"exp({F})/(int(-exp({F})*({Q}), xi) + C1)"


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    P: str
    Q: str
    z: str
    printed_P: str | None = None
    printed_Q: str | None = None
    printed_z: str | None = None
    erratum: str = ""
    notes: str = ""
    c1_scale: str = "1"
    c1_shift: str = "0"

    @property
    def has_erratum(self) -> bool:
        return bool(self.erratum)

    @cached_property
    def equation(self) -> AuxEquation:
        return AuxEquation(parse(self.P), parse(self.Q), 2)

    @cached_property
    def solution(self) -> AuxSolution:
        z = parse(self.z)
        return AuxSolution(z, "quadrature" if has_integral(z) else "closed", self.notes)

    @cached_property
    def printed_equation(self) -> AuxEquation:
        return AuxEquation(parse(self.printed_P or self.P), parse(self.printed_Q or self.Q), 2)

    @cached_property
    def printed_solution(self) -> AuxSolution:
        z = parse(self.printed_z or self.z)
        return AuxSolution(z, "quadrature" if has_integral(z) else "closed", self.notes)

    def general_constant(self) -> Expr:
        """The constant of the general solution matching this entry's ``C1``."""
        return add(mul(parse(self.c1_scale), parse("C1")), parse(self.c1_shift))

    def in_general_form(self, z: Expr) -> Expr:
        """Rewrite a general-solution ``z`` in terms of this entry's ``C1``."""
        return subs(z, {"C1": self.general_constant()})

    def to_dict(self) -> dict:
        return {"index": self.index, "P": self.P, "Q": self.Q, "z": self.z}

    def describe(self) -> dict:
        data = self.to_dict()
        data.update(
            form=self.solution.form,
            notes=self.notes,
            erratum=self.erratum,
            printed={
                "P": self.printed_P or self.P,
                "Q": self.printed_Q or self.Q,
                "z": self.printed_z or self.z,
            },
            c1_map={"scale": self.c1_scale, "shift": self.c1_shift},
        )
        return data


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        1,
        "(A*xi + B)^2",
        "A*xi + B",
        _quadrature("(1/3)*A^2*xi^3 + A*xi^2*B + xi*B^2", "A*xi + B"),
        printed_Q="4*xi + B",
        erratum="Q is printed as 4*xi + B; the printed z solves the equation with Q = A*xi + B.",
        notes="quadrature form; z(0) = 1/C1",
    ),
    CatalogEntry(
        2,
        "A*cos(xi)",
        "B*sin(xi)",
        _quadrature("A*sin(xi)", "B*sin(xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        3,
        "A",
        "(C*xi + B)^2",
        "A^3/(-A^2*B^2 + 2*A*C*B - 2*C^2 - 2*A^2*C*xi*B + 2*A*C^2*xi - C^2*xi^2*A^2"
        " + exp(-A*xi)*C1*A^3)",
        printed_Q="C*xi + B",
        erratum="Q is printed as C*xi + B; the printed z solves the equation with "
        "Q = (C*xi + B)^2.",
        notes="real; poles where the denominator vanishes",
    ),
    CatalogEntry(
        4,
        "A",
        "B",
        "A/(-B + exp(-A*xi)*C1*A)",
        notes="real; logistic profile for A = 1, B = -1",
    ),
    CatalogEntry(
        5,
        "A",
        "exp(C*xi)",
        "(A + C)/(-exp(C*xi) + exp(-A*xi)*C1*A + exp(-A*xi)*C1*C)",
        notes="real; requires A + C != 0",
    ),
    CatalogEntry(
        6,
        "A",
        "exp(C*xi) + B",
        "(A + C)*A/(-A*exp(C*xi) - A*B - B*C + exp(-A*xi)*C1*A^2 + exp(-A*xi)*C1*A*C)",
        notes="real; requires A + C != 0",
    ),
    CatalogEntry(
        7,
        "A*sin(xi)",
        "C*xi + B",
        _quadrature("-A*cos(xi)", "C*xi + B"),
        notes="quadrature form",
    ),
    CatalogEntry(
        8,
        "A*cos(xi)",
        "C*xi + B",
        _quadrature("A*sin(xi)", "C*xi + B"),
        notes="quadrature form",
    ),
    CatalogEntry(
        9,
        "exp(C*xi)",
        "A",
        "C*exp(exp(C*xi)/C)/(Ei1(-exp(C*xi)/C)*A + C1*C)",
        notes="complex for C > 0: the Ei1 argument lies on the branch cut "
        "(limit from the upper half-plane)",
    ),
    CatalogEntry(
        10,
        "exp(C*xi)",
        "A*xi + B",
        _quadrature("exp(C*xi)/C", "A*xi + B"),
        notes="quadrature form",
        c1_shift="-B*Ei1(-1/C)/C",
    ),
    CatalogEntry(
        11,
        "A*xi + B",
        "exp(C*xi)",
        "(-2*A)^(1/2)*exp((1/2)*A*xi^2 + B*xi)/(pi^(1/2)*exp(-(B + C)^2/(2*A))"
        "*erf((A*xi + B + C)/(-2*A)^(1/2)) + C1*(-2*A)^(1/2))",
        notes="complex intermediates for A > 0 ((-2*A)^(1/2) imaginary); z real for real "
        "parameters",
    ),
    CatalogEntry(
        12,
        "A*sin(xi)",
        "exp(C*xi)",
        _quadrature("-A*cos(xi)", "exp(C*xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        13,
        "exp(C*xi)",
        "A*sin(xi)",
        _quadrature("exp(C*xi)/C", "A*sin(xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        14,
        "A*cos(xi)",
        "exp(C*xi)",
        _quadrature("A*sin(xi)", "exp(C*xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        15,
        "exp(C*xi)",
        "A*cos(xi)",
        _quadrature("exp(C*xi)/C", "A*cos(xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        16,
        "A*sin(xi)",
        "B*cos(xi)",
        _quadrature("-A*cos(xi)", "B*cos(xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        17,
        "C*xi + B",
        "A",
        "(-2*C)^(1/2)*exp((1/2)*C*xi^2 + B*xi)/(A*pi^(1/2)*exp(-B^2/(2*C))"
        "*erf((C*xi + B)/(-2*C)^(1/2)) + C1*(-2*C)^(1/2))",
        printed_P="(C*xi + B)^2",
        erratum="P is printed as (C*xi + B)^2; the printed z solves the equation with "
        "P = C*xi + B.",
        notes="complex intermediates for C > 0; z real for real parameters",
    ),
    CatalogEntry(
        18,
        "exp(C*xi)",
        "exp(B*xi)",
        _quadrature("exp(C*xi)/C", "exp(B*xi)"),
        notes="quadrature form",
    ),
    CatalogEntry(
        19,
        "C*xi + B",
        "A*cos(xi)",
        _GAUSS_19.format(s="-"),
        printed_z=_GAUSS_19.format(s=""),
        erratum="the printed exponentials read exp((B +- I)^2/(2*C)); the equation is "
        "solved with exp(-(B +- I)^2/(2*C)).",
        notes="complex intermediates; z real for real parameters",
    ),
    CatalogEntry(
        20,
        "C*xi + B",
        "A*sin(xi)",
        _GAUSS_20.format(f="2*I", s="-", c="2*I"),
        printed_z="-" + _GAUSS_20.format(f="2", s="", c="2"),
        erratum="the printed form lacks the factor I on the numerator and on the C1 term "
        "and has the exponent signs of case 19; corrected accordingly.",
        notes="complex intermediates; z real for real parameters",
    ),
)

CASE1_REDUCED = CatalogEntry(
    0,
    "B^2",
    "B",
    "B/(-1 + C1*B*exp(-B^2*xi))",
    notes="Case 1 with A = 0",
)


def catalog_entry(index: int) -> CatalogEntry:
    if not isinstance(index, int) or not 1 <= index <= len(CATALOG):
        raise CatalogIndexError(index)
    return CATALOG[index - 1]


def catalog_case(index: int) -> tuple[AuxEquation, AuxSolution]:
    entry = catalog_entry(index)
    return entry.equation, entry.solution


def case1_reduced() -> tuple[AuxEquation, AuxSolution]:
    return CASE1_REDUCED.equation, CASE1_REDUCED.solution


def export_catalog_json() -> str:
    rows = sorted((e.to_dict() for e in CATALOG), key=lambda row: row["index"])
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"
