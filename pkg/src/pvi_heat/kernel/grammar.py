"""Plain-text expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := INTEGER | NAME | '(' expr ')'

NAME must be one of the ring variables.  Rationals are written ``p/q``.
``parse(format_ratfunc(f)) == f`` for every RatFunc ``f``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polys import VARIABLES, MultiPoly, RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _monomial(m: tuple, power: str = "^", mul: str = "*") -> str:
    parts = []
    for name, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}{power}{e}")
    return mul.join(parts)


def _format_terms(terms, power="^", mul="*", rational=lambda q: str(q)) -> str:
    if not terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = _monomial(m, power, mul)
        if not mono:
            body = rational(c)
        elif c == 1:
            body = mono
        else:
            body = f"{rational(c)}{mul}{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def _sorted_terms(p: MultiPoly):
    # sympy's terms() is already sorted by the ring order, highest first
    return [(m, Fraction(int(c.numerator), int(c.denominator))) for m, c in p._p.terms()]


def format_poly(p: MultiPoly) -> str:
    return _format_terms(_sorted_terms(p))


def format_ratfunc(f: RatFunc) -> str:
    num = format_poly(f.num)
    if f.is_polynomial():
        return num
    return f"({num})/({format_poly(f.den)})"


def python_source(p: MultiPoly) -> str:
    """Python expression text for ``p`` (floats, complex or numpy arrays)."""
    return _format_terms(
        _sorted_terms(p), power="**", mul="*",
        rational=lambda q: f"({q.numerator}/{q.denominator})" if q.denominator != 1 else f"{q.numerator}",
    )


def _tokenize(text: str) -> list[str]:
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append("^" if tok == "**" else tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value = value + self.term()
            else:
                value = value - self.term()
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                value = value * self.unary()
            else:
                value = value / self.unary()
        return value

    def unary(self) -> RatFunc:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exponent = self.unary()
            if not exponent.is_constant() or exponent.constant_value().denominator != 1:
                raise ParseError("exponents must be integers")
            return base ** int(exponent.constant_value())
        return base

    def atom(self) -> RatFunc:
        tok = self.take()
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        if tok.isdigit():
            return RatFunc(int(tok))
        if tok in VARIABLES:
            return RatFunc.var(tok)
        raise ParseError(f"unknown symbol {tok!r}")


def parse(text: str) -> RatFunc:
    """Parse an expression in the ring variables into a reduced RatFunc."""
    parser = _Parser(_tokenize(text))
    if parser.peek() is None:
        raise ParseError("empty expression")
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input at token {parser.peek()!r}")
    return value
