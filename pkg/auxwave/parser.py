"""
Pratt parser and renderer for the ASCII expression grammar.

Grammar: identifiers ``[A-Za-z_][A-Za-z0-9_]*`` (``I`` and ``pi`` are the named
constants, ``xi`` is the wave variable), decimal literals (kept exact),
``+ - * / ^`` with the usual precedence and right-associative ``^``, calls to
``exp ln sin cos erf Ei1`` and ``int(f, var)`` / ``int(f, var, upper)`` for the
integral of ``f`` from 0 to ``var`` (or ``upper``).

``render`` emits the same grammar, so ``parse(render(e)) == e`` for every
normalized ``e``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from auxwave.exceptions import ParseError, UnknownFunctionError
from auxwave.expr import (
    FUNCTIONS,
    MINUS_ONE,
    NAMED_CONSTANTS,
    Expr,
    FuncApp,
    IntegralRemainder,
    NamedConst,
    Power,
    Product,
    RationalConst,
    Sum,
    Symbol,
    add,
    apply,
    integral,
    is_negative,
    mul,
    neg,
    power,
    split_coefficient,
)

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)

# binding powers
_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = 10, 20, 25, 30, 40
_INFIX = {"+": _SUM, "-": _SUM, "*": _PRODUCT, "/": _PRODUCT, "^": _POWER}


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        if tok.kind != "end":
            self.index += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.advance()
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.pos)
        return tok

    def parse(self) -> Expr:
        expr = self.expression(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return expr

    def expression(self, rbp: int) -> Expr:
        left = self.prefix(self.advance())
        while True:
            tok = self.peek()
            lbp = _INFIX.get(tok.text, 0) if tok.kind == "op" else 0
            if lbp <= rbp:
                return left
            self.advance()
            left = self.infix(tok, left)

    def prefix(self, tok: Token) -> Expr:
        if tok.kind == "number":
            return RationalConst(Fraction(tok.text))
        if tok.kind == "name":
            return self.name(tok)
        if tok.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if tok.text == "-":
            return neg(self.expression(_UNARY))
        if tok.text == "+":
            return self.expression(_UNARY)
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)

    def infix(self, tok: Token, left: Expr) -> Expr:
        op = tok.text
        if op == "^":
            return power(left, self.expression(_POWER - 1))
        right = self.expression(_INFIX[op])
        if op == "+":
            return add(left, right)
        if op == "-":
            return add(left, neg(right))
        if op == "*":
            return mul(left, right)
        return mul(left, power(right, MINUS_ONE))

    def name(self, tok: Token) -> Expr:
        is_call = self.peek().text == "("
        if tok.text == "int" and is_call:
            return self.integral_call()
        if tok.text in FUNCTIONS:
            if not is_call:
                raise ParseError(f"function '{tok.text}' needs an argument", tok.pos)
            self.advance()
            arg = self.expression(0)
            self.expect(")")
            return apply(tok.text, arg)
        if is_call:
            raise UnknownFunctionError(tok.text, tok.pos)
        if tok.text in NAMED_CONSTANTS:
            return NamedConst(tok.text)
        return Symbol(tok.text)

    def integral_call(self) -> Expr:
        self.advance()
        integrand = self.expression(0)
        self.expect(",")
        var_tok = self.advance()
        if var_tok.kind != "name" or var_tok.text in NAMED_CONSTANTS or var_tok.text in FUNCTIONS:
            raise ParseError("integration variable must be a symbol", var_tok.pos)
        var = Symbol(var_tok.text)
        upper = None
        if self.peek().text == ",":
            self.advance()
            upper = self.expression(0)
        self.expect(")")
        return integral(integrand, var, upper)


def parse(text: str) -> Expr:
    """Parse ``text`` into a normalized expression."""
    return _Parser(text).parse()


# Rendering


def render(e: Expr) -> str:
    return _render(e, 0)


def _render(e: Expr, context: int) -> str:
    text, prec = _format(e)
    return f"({text})" if prec < context else text


def _format(e: Expr) -> tuple[str, int]:
    if isinstance(e, RationalConst):
        q = e.value
        if q.denominator == 1:
            return str(q.numerator), (_ATOM if q >= 0 else _UNARY)
        return f"{q.numerator}/{q.denominator}", (_PRODUCT if q >= 0 else _UNARY)
    if isinstance(e, (NamedConst, Symbol)):
        return e.name, _ATOM
    if isinstance(e, FuncApp):
        return f"{e.name}({render(e.arg)})", _ATOM
    if isinstance(e, IntegralRemainder):
        tail = "" if e.upper == e.var else f", {render(e.upper)}"
        return f"int({render(e.integrand)}, {e.var.name}{tail})", _ATOM
    if isinstance(e, Sum):
        return _format_sum(e), _SUM
    if isinstance(e, Product):
        return _format_product(e)
    if isinstance(e, Power):
        if _negative_rational(e.exponent):
            return f"1/{_render(power(e.base, neg(e.exponent)), _PRODUCT + 1)}", _PRODUCT
        return f"{_render(e.base, _POWER + 1)}^{_render(e.exponent, _POWER)}", _POWER
    raise TypeError(f"cannot render {type(e).__name__}")


def _negative_rational(e: Expr) -> bool:
    return isinstance(e, RationalConst) and e.value < 0


def _format_sum(e: Sum) -> str:
    pieces = [_render(e.terms[0], _SUM)]
    for term in e.terms[1:]:
        if is_negative(term):
            pieces.append(f" - {_render(neg(term), _SUM + 1)}")
        else:
            pieces.append(f" + {_render(term, _SUM + 1)}")
    return "".join(pieces)


def _format_product(e: Product) -> tuple[str, int]:
    coefficient, monomial = split_coefficient(e)
    numer: list[Expr] = []
    denom: list[Expr] = []
    for f in monomial.factors if isinstance(monomial, Product) else (monomial,):
        if isinstance(f, Power) and _negative_rational(f.exponent):
            denom.append(power(f.base, neg(f.exponent)))
        else:
            numer.append(f)
    sign = "-" if coefficient < 0 else ""
    coefficient = abs(coefficient)

    top = [_render(f, _PRODUCT + 1) for f in numer]
    if coefficient.numerator != 1 or not top:
        top.insert(0, str(coefficient.numerator))
    bottom = [_render(f, _PRODUCT + 1) for f in denom]
    if coefficient.denominator != 1:
        bottom.insert(0, str(coefficient.denominator))

    text = sign + "*".join(top)
    if len(bottom) == 1:
        text += "/" + bottom[0]
    elif bottom:
        text += "/(" + "*".join(bottom) + ")"
    return text, (_UNARY if sign else _PRODUCT)
