"""Recursive-descent parser for the expression grammar.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*' | '/') factor)*        divisor must be a nonzero constant
    factor := '-' factor | base ['^' ['-'] integer]
    base   := number | ident | ident '_' suffix | func '(' expr ')' | '(' expr ')'

A suffix is a string of coordinate names, order-insensitive: with coordinates
``x y`` both ``u_xy`` and ``u_yx`` denote psi^u_(1,1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ExprSyntaxError, OrderExceeded, UnknownIdentifier
from .multiindex import MultiIndex
from .symexpr import (
    FUNCTIONS,
    BaseVar,
    Expr,
    JetSpace,
    JetVar,
    Opaque,
    apply_function,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)?)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def split_suffix(suffix: str, coords: tuple[str, ...]) -> list[int] | None:
    """Decompose ``suffix`` into coordinate names (longest match first)."""
    by_len = sorted(range(len(coords)), key=lambda i: -len(coords[i]))

    def go(rest):
        if not rest:
            return []
        for i in by_len:
            if rest.startswith(coords[i]):
                tail = go(rest[len(coords[i]):])
                if tail is not None:
                    return [i] + tail
        return None

    return go(suffix)


class _Parser:
    def __init__(self, text: str, space: JetSpace, opaque: Iterable[str]):
        self.text = text
        self.space = space
        self.opaque = set(opaque)
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.k]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ExprSyntaxError(msg, tok.pos, self.text)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.k += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        out = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return out

    def expr(self) -> Expr:
        if self.accept("-"):
            out = -self.term()
        else:
            self.accept("+")
            out = self.term()
        while True:
            if self.accept("+"):
                out = out + self.term()
            elif self.accept("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> Expr:
        out = self.factor()
        while True:
            if self.accept("*"):
                out = out * self.factor()
            elif self.tok.kind == "op" and self.tok.text == "/":
                tok = self.tok
                self.k += 1
                div = self.factor()
                if not div.is_constant():
                    raise self.error("can only divide by a constant", tok)
                if div.is_zero():
                    raise self.error("division by zero", tok)
                out = out / div
            else:
                return out

    def factor(self) -> Expr:
        if self.accept("-"):
            return -self.factor()
        base = self.base()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise self.error("exponent must be an integer")
            self.k += 1
            try:
                return base ** (sign * int(tok.text))
            except ZeroDivisionError:
                raise self.error("zero raised to a negative power", tok) from None
        return base

    def base(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.k += 1
            return Expr.const(Fraction(tok.text))
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.k += 1
            return self.identifier(tok)
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def identifier(self, tok: _Tok) -> Expr:
        name, _, suffix = tok.text.partition("_")
        sp = self.space
        if name in FUNCTIONS and not suffix:
            if not (self.tok.kind == "op" and self.tok.text == "("):
                raise self.error(f"function {name} needs an argument")
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return apply_function(name, arg)
        if name in sp.coords:
            if suffix:
                raise UnknownIdentifier(f"{tok.text!r} at position {tok.pos}: coordinates take no suffix")
            return Expr.atom(BaseVar(sp.coords.index(name)))
        if name in sp.fields or name in self.opaque:
            index = self.resolve_suffix(suffix, tok)
            if name in sp.fields:
                if index.order > sp.max_order:
                    raise OrderExceeded(
                        f"{tok.text!r} at position {tok.pos} has order {index.order} > {sp.max_order}"
                    )
                return Expr.atom(JetVar(sp.fields.index(name), index))
            return Expr.atom(Opaque(name, index))
        raise UnknownIdentifier(f"unknown identifier {tok.text!r} at position {tok.pos}")

    def resolve_suffix(self, suffix: str, tok: _Tok) -> MultiIndex:
        counts = [0] * self.space.p
        if suffix:
            axes = split_suffix(suffix, self.space.coords)
            if axes is None:
                raise UnknownIdentifier(
                    f"suffix {suffix!r} of {tok.text!r} at position {tok.pos} is not made of coordinate names"
                )
            for i in axes:
                counts[i] += 1
        return MultiIndex(tuple(counts))


def parse_expr(text: str, space: JetSpace, opaque: Iterable[str] = ()) -> Expr:
    """Parse ``text`` over ``space``; names in ``opaque`` become opaque functions of
    the base coordinates (``U_x`` is the x-derivative of ``U``)."""
    return _Parser(text, space, opaque).parse()
