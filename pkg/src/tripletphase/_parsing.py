"""Recursive-descent parser shared by the Laurent and symbolic polynomial formats.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('-' | '+') unary | power
    power := atom ('^' ['-' | '+'] INT)?
    atom  := INT | IDENT | '(' expr ')'

Values are built through a ``builder`` exposing ``const``, ``var``, ``div``
and ``pow``; ``+``, ``-``, ``*`` and unary minus use the value's operators.
"""

from __future__ import annotations

import re

from .errors import PolynomialSyntaxError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, builder):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.b = builder

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "eof":
            self.fail("empty input")
        value = self.expr()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, tok = self.take()[1], self.tokens[self.i]
            rhs = self.unary()
            value = value * rhs if op == "*" else self.b.div(value, rhs, tok[2])
        return value

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] in (("op", "-"), ("op", "+")):
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.peek()
            if tok[0] != "int":
                self.fail("expected integer exponent")
            self.take()
            return self.b.pow(base, sign * int(tok[1]), tok[2])
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.b.const(int(tok[1]))
        if tok[0] == "ident":
            self.take()
            return self.b.var(tok[1], tok[2])
        if tok[:2] == ("op", "("):
            self.take()
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return value
        self.fail("expected a number, variable or '('")


def parse_with(text: str, builder):
    return _Parser(text, builder).parse()
