"""
Immutable symbolic expressions in canonical form.

Nodes are frozen dataclasses and are normally built through the smart
constructors ``add``, ``mul``, ``power``, ``apply`` and ``integral``, which keep
every tree normalized:

* Sum and Product nodes are flat, with rational constants folded into a single
  leading term (Sum) or leading coefficient (Product).
* Like terms of a Sum merge over identical monomials; equal bases of a Product
  merge by adding exponents, and every ``exp`` factor merges into one.
* No Power with exponent 0 or 1 survives, integer powers of products, powers
  and ``exp`` are distributed, and exact rational powers are folded.
* Operands are sorted by the canonical key
  ``(variant rank, function id, recursive operand keys)``. Product factors sort
  by (base key, exponent key) so powers of the same base sit together; Sum terms
  sort by the key of their monomial.

Simplification is deliberately shallow: no trigonometric identities, no
expansion of powers of sums (see ``expand``), no cancellation across sums.
"""

from __future__ import annotations

import math
import numbers
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from auxwave.exceptions import ExpressionError, UnknownFunctionError

FUNCTIONS = ("exp", "ln", "sin", "cos", "erf", "Ei1")
NAMED_CONSTANTS = ("I", "pi")

(
    RANK_RATIONAL,
    RANK_NAMED,
    RANK_PRODUCT,
    RANK_POWER,
    RANK_SYMBOL,
    RANK_FUNCTION,
    RANK_INTEGRAL,
    RANK_SUM,
) = range(8)

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Expr:
    """Base of all expression nodes.

    Hash, canonical key and free-symbol set are computed once at construction
    from the (already computed) values of the children.
    """

    __slots__ = ()

    def _finish(self, fields, key, free):
        object.__setattr__(self, "_fields", fields)
        object.__setattr__(self, "_hash", hash((type(self).__name__, fields)))
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_free", free)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Expr) else False
        return self._hash == other._hash and self._fields == other._fields

    def __hash__(self):
        return self._hash

    @property
    def sort_key(self):
        return self._key

    @property
    def free_symbols(self) -> frozenset[str]:
        return self._free

    def __str__(self):
        from auxwave.parser import render

        return render(self)

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(other, MINUS_ONE))

    def __rtruediv__(self, other):
        return mul(other, power(self, MINUS_ONE))

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)

    def __neg__(self):
        return neg(self)


_EMPTY = frozenset()


@dataclass(frozen=True, eq=False)
class RationalConst(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        self._finish((self.value,), (RANK_RATIONAL, self.value), _EMPTY)


@dataclass(frozen=True, eq=False)
class NamedConst(Expr):
    name: str

    def __post_init__(self):
        if self.name not in NAMED_CONSTANTS:
            raise ExpressionError(f"unknown named constant '{self.name}'")
        self._finish((self.name,), (RANK_NAMED, self.name), _EMPTY)


@dataclass(frozen=True, eq=False)
class Symbol(Expr):
    name: str

    def __post_init__(self):
        if not _IDENTIFIER.match(self.name) or self.name in NAMED_CONSTANTS:
            raise ExpressionError(f"invalid symbol name '{self.name}'")
        self._finish((self.name,), (RANK_SYMBOL, self.name), frozenset((self.name,)))


@dataclass(frozen=True, eq=False)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def __post_init__(self):
        self._finish(
            self.terms,
            (RANK_SUM, tuple(t._key for t in self.terms)),
            frozenset().union(*(t._free for t in self.terms)),
        )


@dataclass(frozen=True, eq=False)
class Product(Expr):
    factors: tuple[Expr, ...]

    def __post_init__(self):
        self._finish(
            self.factors,
            (RANK_PRODUCT, tuple(f._key for f in self.factors)),
            frozenset().union(*(f._free for f in self.factors)),
        )


@dataclass(frozen=True, eq=False)
class Power(Expr):
    base: Expr
    exponent: Expr

    def __post_init__(self):
        self._finish(
            (self.base, self.exponent),
            (RANK_POWER, self.base._key, self.exponent._key),
            self.base._free | self.exponent._free,
        )


@dataclass(frozen=True, eq=False)
class FuncApp(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise UnknownFunctionError(self.name)
        self._finish(
            (self.name, self.arg),
            (RANK_FUNCTION, FUNCTIONS.index(self.name), self.arg._key),
            self.arg._free,
        )


@dataclass(frozen=True, eq=False)
class IntegralRemainder(Expr):
    """Integral of ``integrand`` over ``var`` from 0 to ``upper``."""

    integrand: Expr
    var: Symbol
    upper: Expr

    def __post_init__(self):
        self._finish(
            (self.integrand, self.var, self.upper),
            (RANK_INTEGRAL, self.integrand._key, self.var.name, self.upper._key),
            (self.integrand._free - {self.var.name}) | self.upper._free,
        )


ZERO = RationalConst(Fraction(0))
ONE = RationalConst(Fraction(1))
MINUS_ONE = RationalConst(Fraction(-1))
HALF = RationalConst(Fraction(1, 2))
I = NamedConst("I")  # noqa: E741
PI = NamedConst("pi")
XI = Symbol("xi")


# Conversion helpers


def const(value) -> RationalConst:
    return RationalConst(Fraction(value))


def sym(name: str) -> Symbol:
    return Symbol(name)


def symbols(names: str) -> tuple[Symbol, ...]:
    return tuple(Symbol(n) for n in names.replace(",", " ").split())


def _real_fraction(x: float, max_denominator: int) -> Fraction:
    if not math.isfinite(x):
        raise ExpressionError(f"cannot convert non-finite value {x!r} to an expression")
    exact = Fraction(x)
    approx = exact.limit_denominator(max_denominator)
    if abs(float(approx) - x) <= 1e-13 * max(1.0, abs(x)):
        return approx
    return exact


def to_expr(value, max_denominator: int = 10**9) -> Expr:
    """Convert a Python or numpy number to an expression.

    Floats snap to a nearby small-denominator rational when one lies within
    1e-13 relative; otherwise the exact binary value is kept.
    """
    if isinstance(value, Expr):
        return value
    if isinstance(value, (Fraction, numbers.Integral)):
        return RationalConst(Fraction(value))
    if isinstance(value, numbers.Number):
        c = complex(value)
        real = RationalConst(_real_fraction(c.real, max_denominator))
        if c.imag == 0:
            return real
        return add(real, mul(RationalConst(_real_fraction(c.imag, max_denominator)), I))
    raise ExpressionError(f"cannot convert {value!r} to an expression")


as_expr = to_expr


# Structural helpers


def is_exp(e: Expr) -> bool:
    return isinstance(e, FuncApp) and e.name == "exp"


def is_integer(e: Expr) -> bool:
    return isinstance(e, RationalConst) and e.value.denominator == 1


def terms_of(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Sum) else (e,)


def factors_of(e: Expr) -> tuple[Expr, ...]:
    return e.factors if isinstance(e, Product) else (e,)


def as_base_exp(e: Expr) -> tuple[Expr, Expr]:
    if isinstance(e, Power):
        return e.base, e.exponent
    return e, ONE


def split_coefficient(term: Expr) -> tuple[Fraction, Expr]:
    """Split a term into its rational coefficient and the remaining monomial."""
    if isinstance(term, RationalConst):
        return term.value, ONE
    if isinstance(term, Product) and isinstance(term.factors[0], RationalConst):
        rest = term.factors[1:]
        return term.factors[0].value, rest[0] if len(rest) == 1 else Product(rest)
    return Fraction(1), term


def is_negative(term: Expr) -> bool:
    return split_coefficient(term)[0] < 0


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal over every node."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, Power):
        return (e.base, e.exponent)
    if isinstance(e, FuncApp):
        return (e.arg,)
    if isinstance(e, IntegralRemainder):
        return (e.integrand, e.upper)
    return ()


def has_integral(e: Expr) -> bool:
    return any(isinstance(node, IntegralRemainder) for node in walk(e))


def _flatten(items: Iterable[Expr], kind: type) -> Iterator[Expr]:
    for item in items:
        if isinstance(item, kind):
            yield from item._fields
        else:
            yield item


def _term_key(item):
    return item[0]._key


def _factor_key(f: Expr):
    base, exponent = as_base_exp(f)
    return (base._key, exponent._key)


def _scale(coefficient: Fraction, monomial: Expr) -> Expr:
    if coefficient == 1:
        return monomial
    head = RationalConst(coefficient)
    if isinstance(monomial, Product):
        return Product((head, *monomial.factors))
    return Product((head, monomial))


# Smart constructors


def add(*terms) -> Expr:
    constant = Fraction(0)
    merged: dict[Expr, Fraction] = {}
    for term in _flatten(map(as_expr, terms), Sum):
        if isinstance(term, RationalConst):
            constant += term.value
            continue
        coefficient, monomial = split_coefficient(term)
        merged[monomial] = merged.get(monomial, Fraction(0)) + coefficient
    parts = sorted(((m, c) for m, c in merged.items() if c), key=_term_key)
    out = [_scale(c, m) for m, c in parts]
    if constant:
        out.insert(0, RationalConst(constant))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Sum(tuple(out))


def neg(e) -> Expr:
    return mul(MINUS_ONE, e)


def sub(a, b) -> Expr:
    return add(a, neg(b))


def mul(*factors) -> Expr:
    coefficient = Fraction(1)
    exponents: dict[Expr, list[Expr]] = {}
    exp_args: list[Expr] = []
    for f in _flatten(map(as_expr, factors), Product):
        if isinstance(f, RationalConst):
            if not f.value:
                return ZERO
            coefficient *= f.value
        elif is_exp(f):
            exp_args.append(f.arg)
        else:
            base, exponent = as_base_exp(f)
            exponents.setdefault(base, []).append(exponent)

    built: list[Expr] = []
    refold = False
    for base, found in exponents.items():
        p = power(base, found[0] if len(found) == 1 else add(*found))
        refold = refold or isinstance(p, (RationalConst, Product)) or is_exp(p)
        built.append(p)
    if exp_args:
        e = apply("exp", exp_args[0] if len(exp_args) == 1 else add(*exp_args))
        refold = refold or not is_exp(e)
        built.append(e)
    if refold:
        return mul(RationalConst(coefficient), *built)

    built.sort(key=_factor_key)
    if not built:
        return RationalConst(coefficient)
    if len(built) == 1:
        (only,) = built
        if coefficient == 1:
            return only
        if isinstance(only, Sum):
            return add(*(mul(RationalConst(coefficient), t) for t in only.terms))
    head = () if coefficient == 1 else (RationalConst(coefficient),)
    return Product((*head, *built))


def _exact_root(k: int, r: int) -> int | None:
    if k < 0:
        return None
    guess = round(k ** (1.0 / r)) if k < 2**1000 else None
    if guess is None:
        return None
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate**r == k:
            return candidate
    return None


def _rational_power(q: Fraction, n: Fraction) -> Expr:
    if q == 0:
        if n > 0:
            return ZERO
        raise ExpressionError("zero raised to a non-positive power")
    if q == 1:
        return ONE
    if n.denominator == 1:
        return RationalConst(q ** int(n))
    if q > 0:
        num = _exact_root(q.numerator, n.denominator)
        den = _exact_root(q.denominator, n.denominator)
        if num is not None and den is not None:
            return RationalConst(Fraction(num, den) ** n.numerator)
    return Power(RationalConst(q), RationalConst(n))


def power(base, exponent) -> Expr:
    base, exponent = as_expr(base), as_expr(exponent)
    if isinstance(exponent, RationalConst):
        n = exponent.value
        if n == 0:
            return ONE
        if n == 1:
            return base
        if isinstance(base, RationalConst):
            return _rational_power(base.value, n)
        if n.denominator == 1:
            if base == I:
                return (ONE, I, MINUS_ONE, Product((MINUS_ONE, I)))[int(n) % 4]
            if isinstance(base, Power):
                return power(base.base, mul(base.exponent, exponent))
            if isinstance(base, Product):
                return mul(*(power(f, exponent) for f in base.factors))
            if is_exp(base):
                return apply("exp", mul(exponent, base.arg))
    elif isinstance(base, RationalConst) and base.value == 1:
        return ONE
    return Power(base, exponent)


def sqrt(e) -> Expr:
    return power(e, HALF)


def apply(name: str, arg) -> Expr:
    if name not in FUNCTIONS:
        raise UnknownFunctionError(name)
    arg = as_expr(arg)
    if name == "exp":
        if arg == ZERO:
            return ONE
        if isinstance(arg, FuncApp) and arg.name == "ln":
            return arg.arg
    elif name == "ln":
        if arg == ONE:
            return ZERO
    elif name in ("sin", "erf"):
        if arg == ZERO:
            return ZERO
    elif name == "cos" and arg == ZERO:
        return ONE
    return FuncApp(name, arg)


def exp(arg) -> Expr:
    return apply("exp", arg)


def integral(integrand, var: Symbol, upper=None) -> Expr:
    """Integral from 0 to ``upper`` (default: ``var`` itself)."""
    integrand = as_expr(integrand)
    upper = var if upper is None else as_expr(upper)
    if integrand == ZERO or upper == ZERO:
        return ZERO
    if var.name not in integrand._free:
        return mul(integrand, upper)
    return IntegralRemainder(integrand, var, upper)


# Whole-tree operations


def map_children(e: Expr, fn) -> Expr:
    """Rebuild ``e`` through the smart constructors with ``fn`` applied to each child."""
    if isinstance(e, Sum):
        return add(*(fn(t) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(fn(f) for f in e.factors))
    if isinstance(e, Power):
        return power(fn(e.base), fn(e.exponent))
    if isinstance(e, FuncApp):
        return apply(e.name, fn(e.arg))
    if isinstance(e, IntegralRemainder):
        return integral(fn(e.integrand), e.var, fn(e.upper))
    return e


def normalize(e: Expr) -> Expr:
    return map_children(e, normalize)


def _fresh_name(base: str, taken: frozenset[str]) -> str:
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def subs(e: Expr, mapping: Mapping) -> Expr:
    """Simultaneous, capture-avoiding substitution of symbols by expressions."""
    table = {(k.name if isinstance(k, Symbol) else k): as_expr(v) for k, v in mapping.items()}
    if not table:
        return e
    names = frozenset(table)
    memo: dict[Expr, Expr] = {}

    def visit(node: Expr) -> Expr:
        if not (node._free & names):
            return node
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Symbol):
            out = table[node.name]
        elif isinstance(node, IntegralRemainder):
            out = _subs_integral(node, table)
        else:
            out = map_children(node, visit)
        memo[node] = out
        return out

    return visit(e)


def _subs_integral(node: IntegralRemainder, table: dict[str, Expr]) -> Expr:
    var = node.var
    upper = subs(node.upper, table)
    inner = {k: v for k, v in table.items() if k != var.name and k in node.integrand._free}
    integrand = node.integrand
    if inner:
        if any(var.name in v._free for v in inner.values()):
            taken = frozenset().union(integrand._free, *(v._free for v in inner.values()))
            fresh = Symbol(_fresh_name(var.name, taken))
            integrand = subs(integrand, {var.name: fresh})
            var = fresh
        integrand = subs(integrand, inner)
    return integral(integrand, var, upper)


def substitute(e: Expr, s: Symbol, replacement) -> Expr:
    return subs(e, {s.name: replacement})


def expand(e: Expr) -> Expr:
    """Distribute products over sums and expand positive integer powers of sums.

    Function arguments and integrands are left untouched.
    """
    if isinstance(e, Sum):
        return add(*(expand(t) for t in e.terms))
    if isinstance(e, Product):
        return _expand_product([expand(f) for f in e.factors])
    if (
        isinstance(e, Power)
        and isinstance(e.base, Sum)
        and is_integer(e.exponent)
        and e.exponent.value > 0
    ):
        return _expand_product([expand(e.base)] * int(e.exponent.value))
    return e


def _expand_product(factors: list[Expr]) -> Expr:
    partial = [ONE]
    for f in factors:
        parts = terms_of(f)
        partial = [mul(a, b) for a in partial for b in parts]
    return add(*partial)
