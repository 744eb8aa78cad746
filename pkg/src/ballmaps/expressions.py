"""Parsing and formatting of coefficient and polynomial expressions.

Coefficient grammar: rationals ``p/q``, the imaginary unit ``i``,
``sqrt(r)`` with r a positive rational, ``+ - *`` and parentheses.
Decimal literals switch the whole expression to the float backend.
``sqrt(p/q)`` is normalized to ``sqrt(p*q)/q`` by the scalar layer.

Polynomial grammar layers variables on top: a polynomial is
``term (('+'|'-') term)*`` where a term is an optional coefficient, an
optional ``*`` and a product of ``var`` or ``var^k`` factors.  Adjacent
factors multiply implicitly, so ``2z^2*w`` and ``2*z^2*w`` agree.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .poly import Poly
from .scalars import Scalar, SqrtNotRepresentable


class ParseError(ValueError):
    """Syntax or semantic error in an input expression, with position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(r"""
    (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[+\-*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            value = m.group()
            if kind == "op" and value == "**":
                value = "^"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser producing a Poly over declared variables."""

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.names = list(names)
        self.index = {n: j for j, n in enumerate(names)}
        self.nvars = len(names)

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.advance()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end'!r}", pos)

    def parse(self) -> Poly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing {val!r}", pos)
        return p

    def expr(self) -> Poly:
        kind, val, _ = self.peek()
        if val in "+-":
            self.advance()
            p = self.term()
            if val == "-":
                p = -p
        else:
            p = self.term()
        while True:
            kind, val, _ = self.peek()
            if val == "+":
                self.advance()
                p = p + self.term()
            elif val == "-":
                self.advance()
                p = p - self.term()
            else:
                return p

    def _starts_atom(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("num", "name") or val == "("

    def term(self) -> Poly:
        p = self.factor()
        while True:
            kind, val, pos = self.peek()
            if val == "*":
                self.advance()
                p = p * self.factor()
            elif val == "/":
                self.advance()
                q = self.factor()
                if not q.is_constant():
                    raise ParseError("division by a non-constant", pos)
                c = q.constant_term()
                if c.is_zero():
                    raise ParseError("division by zero", pos)
                p = p.scale(c.invert())
            elif self._starts_atom():
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Poly:
        kind, val, pos = self.peek()
        if val == "-":
            self.advance()
            return -self.factor()
        if val == "+":
            self.advance()
            return self.factor()
        p = self.atom()
        kind, val, _ = self.peek()
        if val == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != "num" or not val.isdigit():
                raise ParseError("exponent must be a non-negative integer", pos)
            p = p ** int(val)
        return p

    def atom(self) -> Poly:
        kind, val, pos = self.advance()
        if kind == "num":
            if "." in val or "e" in val or "E" in val:
                return Poly.constant(Scalar.from_float(val), self.nvars)
            return Poly.constant(Scalar.exact(int(val)), self.nvars)
        if kind == "name":
            if val == "i":
                return Poly.constant(Scalar.i(), self.nvars)
            if val == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                if not arg.is_constant():
                    raise ParseError("sqrt of a non-constant", pos)
                c = arg.constant_term()
                try:
                    return Poly.constant(c.sqrt(), self.nvars)
                except SqrtNotRepresentable as exc:
                    raise ParseError(str(exc), pos) from None
            if val in self.index:
                return Poly.variable(self.index[val], self.nvars)
            raise ParseError(f"unknown variable {val!r}", pos)
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {val or 'end'!r}", pos)


def poly_parse(text: str, names: Sequence[str]) -> Poly:
    """Parse a polynomial expression over the declared variable names."""
    return _Parser(text, names).parse()


def scalar_parse(text: str) -> Scalar:
    """Parse a coefficient expression into a canonical Scalar."""
    p = _Parser(text, []).parse()
    return p.constant_term()


def scalar_format(x: Scalar) -> str:
    return x.to_expr()


def poly_format(p: Poly, names: Sequence[str]) -> str:
    return p.to_expr(names)


def fraction_from_text(text: str) -> Fraction:
    s = scalar_parse(text)
    return s.as_fraction()
