"""Parsing and canonical printing of algebra expressions.

Grammar (whitespace is insignificant, ``*`` between factors optional)::

    expr   := term (('+' | '-') term)*
    term   := '-'? factor ('*'? factor)*
    factor := ('x' | 'y' | literal | '(' expr ')') ('^' nat)?
    literal:= nat ('/' nat)?

Juxtaposition is the (noncommutative) product of R.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import AlgebraElement
from .scalars import FieldCtx

__all__ = ["ParseError", "parse", "format_element", "parse_tree", "Sum", "Product", "Power", "Symbol", "Literal"]


class ParseError(ValueError):
    """Syntax or value error at a 0-based character ``offset``."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Literal:
    value: Fraction
    offset: int


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple  # (sign, node) pairs, sign is +1 or -1


Node = Union[Symbol, Literal, Power, Product, Sum]

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        else:
            ch = m.group(2)
            if ch in "xy":
                toks.append(("sym", ch, m.start(2)))
            elif ch in "+-*/^()":
                toks.append((ch, ch, m.start(2)))
            elif ch.isspace():
                pass
            else:
                raise ParseError(f"unexpected character {ch!r}", m.start(2))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str):
        t = self.tok
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1] or 'end of input'!r}", t[2])
        return self.advance()

    def parse(self) -> Node:
        if self.tok[0] == "end":
            raise ParseError("empty expression", self.tok[2])
        node = self.expr()
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return node

    def expr(self) -> Node:
        terms = [self.term()]
        while self.tok[0] in ("+", "-"):
            sign = 1 if self.advance()[0] == "+" else -1
            t = self.term()
            terms.append((sign * t[0], t[1]))
        return Sum(tuple(terms))

    def term(self) -> tuple[int, Node]:
        sign = 1
        if self.tok[0] == "-":
            self.advance()
            sign = -1
        factors = [self.factor()]
        while True:
            if self.tok[0] == "*":
                self.advance()
                factors.append(self.factor())
            elif self.tok[0] in ("sym", "int", "("):
                factors.append(self.factor())
            else:
                break
        return sign, (factors[0] if len(factors) == 1 else Product(tuple(factors)))

    def factor(self) -> Node:
        kind, val, off = self.tok
        if kind == "sym":
            self.advance()
            base: Node = Symbol(val)
        elif kind == "int":
            base = self.literal()
        elif kind == "(":
            self.advance()
            base = self.expr()
            self.expect(")")
        elif kind == "end":
            raise ParseError("unexpected end of input", off)
        else:
            raise ParseError(f"unexpected {val!r}", off)
        if self.tok[0] == "^":
            self.advance()
            kind, val, off = self.tok
            if kind == "-":
                raise ParseError("negative exponent", off)
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", off)
            self.advance()
            if self.tok[0] == "/":
                raise ParseError("non-integer exponent", off)
            base = Power(base, int(val))
        return base

    def literal(self) -> Literal:
        kind, val, off = self.advance()
        num = int(val)
        if self.tok[0] == "/":
            self.advance()
            kind, den, doff = self.tok
            if kind != "int":
                raise ParseError("expected denominator", doff)
            self.advance()
            if int(den) == 0:
                raise ParseError("division by zero", doff)
            return Literal(Fraction(num, int(den)), off)
        return Literal(Fraction(num), off)


def parse_tree(text: str) -> Node:
    """Parse text into an expression tree without evaluating it."""
    return _Parser(text).parse()


def _evaluate(node: Node, ctx: FieldCtx) -> AlgebraElement:
    if isinstance(node, Symbol):
        return AlgebraElement.x(ctx) if node.name == "x" else AlgebraElement.y(ctx)
    if isinstance(node, Literal):
        try:
            return AlgebraElement.scalar(ctx, node.value)
        except ZeroDivisionError:
            raise ParseError(f"denominator {node.value.denominator} is zero in {ctx}", node.offset) from None
    if isinstance(node, Power):
        return _evaluate(node.base, ctx) ** node.exponent
    if isinstance(node, Product):
        out = AlgebraElement.one(ctx)
        for f in node.factors:
            out = out * _evaluate(f, ctx)
        return out
    out = AlgebraElement.zero(ctx)
    for sign, t in node.terms:
        v = _evaluate(t, ctx)
        out = out + v if sign > 0 else out - v
    return out


def parse(text: str, ctx: FieldCtx) -> AlgebraElement:
    """Parse and evaluate an expression in R over ``ctx``.

    >>> from tjk.scalars import FieldCtx
    >>> str(parse("x*y", FieldCtx.rationals()))
    '1'
    """
    return _evaluate(parse_tree(text), ctx)


def _monomial_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("y" if i == 1 else f"y^{i}")
    if j:
        parts.append("x" if j == 1 else f"x^{j}")
    return "*".join(parts)


def format_element(a: AlgebraElement) -> str:
    """Canonical text, terms ordered by ascending y-exponent then x-exponent."""
    ctx = a.ctx
    if not a.terms:
        return "0"
    out = []
    for (i, j), c in a.sorted_terms():
        neg = False
        if not ctx.characteristic and c < 0:
            neg, c = True, -c
        mono = _monomial_text(i, j)
        cs = ctx.format(c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
