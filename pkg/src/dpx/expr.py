"""Parser for polynomial expressions.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' ['-'] natural)?
    base   := integer | identifier | '(' expr ')'

``t`` names the deformation parameter and is only accepted when the target
ring has Q(t) scalars.  Division and negative powers are allowed only when
the right operand (respectively the base) is a nonzero scalar.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .poly import QQ, QQT, Poly, PolyRing
from .scalar import PARAM, RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text, line, col0):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, op = m.groups()
        start = m.start(m.lastindex) + col0
        if num is not None:
            toks.append(("num", int(num), start))
        elif ident is not None:
            toks.append(("id", ident, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", line, start)
            toks.append(("op", op, start))
        pos = m.end()
    toks.append(("end", None, len(text) + col0))
    return toks


class _Parser:
    def __init__(self, text, ring, line, col0):
        self.ring = ring
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs_tok = self.peek()
                rhs = self.factor()
                if tok[1] == "*":
                    value = value * rhs
                else:
                    if not rhs.is_constant() or not rhs:
                        self.fail("can only divide by a nonzero scalar", rhs_tok)
                    value = value / rhs.constant_value()
            else:
                return value

    def factor(self):
        base_tok = self.peek()
        value = self.base()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                neg = True
            ntok = self.take()
            if ntok[0] != "num":
                self.fail("expected a natural exponent", ntok)
            if neg:
                if not value.is_constant() or not value:
                    self.fail("negative powers need a nonzero scalar base", base_tok)
                c = value.constant_value()
                value = self.ring.const(1 / c ** ntok[1]) if ntok[1] else self.ring.one()
            else:
                value = value ** ntok[1]
        return value

    def base(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.const(val)
        if kind == "id":
            if val == PARAM:
                if self.ring.scalar_kind != QQT:
                    self.fail(f"parameter '{PARAM}' is not allowed over Q", tok)
                return self.ring.const(RatFunc.t())
            if val not in self.ring.generators:
                self.fail(f"unknown identifier {val!r}", tok)
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        self.fail("expected a number, identifier or '('", tok)


def parse_poly(text: str, ring: PolyRing, line=None, column=1) -> Poly:
    """Parse ``text`` as an element of ``ring``."""
    return _Parser(text, ring, line, column).parse()


def parse_scalar(text: str, kind: str = QQ, line=None, column=1):
    """Parse a scalar (a Fraction over Q, a RatFunc over Q(t))."""
    ring = PolyRing((), kind)
    return parse_poly(text, ring, line, column).constant_value()
