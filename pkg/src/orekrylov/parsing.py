"""Tiny recursive-descent parser for the text formats.

Grammar (usual precedence, ``^`` binds tightest and is right associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' integer)?
    atom   := integer | name | '(' expr ')'

Values are produced by a caller supplied environment, so the same parser
serves rational functions, operators and bivariate polynomials.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Mapping

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Mapping[str, Any], const: Callable[[Fraction], Any]):
        self.toks = tokenize(text)
        self.i = 0
        self.names = names
        self.const = const

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.take()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                v = v * rhs
            else:
                try:
                    v = v / rhs
                except (TypeError, ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"invalid division: {exc}", pos) from None
        return v

    def unary(self):
        t = self.peek()
        if t[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if t[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            neg = False
            if self.peek()[:2] == ("op", "-"):
                self.take()
                neg = True
            t = self.expect("num")
            k = int(t[1])
            try:
                return base ** (-k if neg else k)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"invalid power: {exc}", t[2]) from None
        return base

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return self.const(Fraction(int(t[1])))
        if t[0] == "name":
            if t[1] not in self.names:
                raise ParseError(f"unknown symbol {t[1]!r}", t[2])
            return self.names[t[1]]
        if t[:2] == ("op", "("):
            v = self.expr()
            self.expect("op", ")")
            return v
        raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2])


def parse_expression(text: str, names: Mapping[str, Any], const: Callable[[Fraction], Any]):
    if not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text, names, const).parse()


def parse_ratfunc(text: str):
    """Parse a rational function in ``x``, e.g. ``(x+1)/(x^2-1)``."""
    from .algebra import RatFunc

    return parse_expression(text, {"x": RatFunc.x()}, lambda c: RatFunc(c))


def parse_poly(text: str):
    from .algebra import Poly

    f = parse_ratfunc(text)
    if not f.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial", 0)
    return Poly(f.num.coeffs()) if not f.is_zero() else Poly()
