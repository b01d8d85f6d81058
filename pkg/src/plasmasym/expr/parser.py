"""Pratt parser for infix formulas.

Grammar: numbers, identifiers, `+ - * / ^`, unary minus/plus, parentheses and
calls `f(a, b)` of the supported functions. `^` is right-associative and binds
tighter than unary minus (`-x^2` is `-(x^2)`). Juxtaposition is an error, so
`2x` must be written `2*x`. Names `pi` and `I` are the constants pi and sqrt(-1).
"""
from __future__ import annotations

import math
import re

from .nodes import Add, Call, Const, Div, Expr, FUNCTIONS, Mul, Neg, Pow, Var
from .registry import DEFAULT, Registry


class ParseError(ValueError):
    def __init__(self, message, position, source=""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}")


class UnknownIdentifierError(ParseError):
    pass


CONSTANTS = {"pi": math.pi, "I": 1j}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def tokenize(source: str):
    pos = 0
    tokens = []
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY = 30


class _Parser:
    def __init__(self, source: str, registry: Registry):
        self.source = source
        self.registry = registry
        self.tokens = tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, value, pos = self.advance()
        if value != text:
            what = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {what}", pos, self.source)

    def parse(self) -> Expr:
        e = self.expression(0)
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos, self.source)
        return e

    def expression(self, rbp: int) -> Expr:
        left = self.prefix()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in _BINARY:
                lbp = _BINARY[value]
                if lbp <= rbp:
                    break
                self.advance()
                if value == "^":
                    right = self.expression(lbp - 1)
                else:
                    right = self.expression(lbp)
                left = self.binary(value, left, right)
            elif kind in ("num", "ident") or (kind == "op" and value == "("):
                raise ParseError("implicit multiplication is not allowed", pos, self.source)
            else:
                break
        return left

    @staticmethod
    def binary(op, a, b):
        if op == "+":
            return Add(a, b)
        if op == "-":
            return Add(a, Neg(b))
        if op == "*":
            return Mul(a, b)
        if op == "/":
            return Div(a, b)
        return Pow(a, b)

    def prefix(self) -> Expr:
        kind, value, pos = self.advance()
        if kind == "num":
            if re.fullmatch(r"\d+", value):
                return Const(int(value))
            return Const(float(value))
        if kind == "ident":
            return self.identifier(value, pos)
        if kind == "op" and value == "(":
            e = self.expression(0)
            self.expect(")")
            return e
        if kind == "op" and value == "-":
            return Neg(self.expression(_UNARY))
        if kind == "op" and value == "+":
            return self.expression(_UNARY)
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", pos, self.source)

    def identifier(self, name, pos) -> Expr:
        nxt = self.peek()
        if name in FUNCTIONS:
            if nxt[1] != "(":
                raise ParseError(f"function {name!r} must be called", pos, self.source)
            self.advance()
            args = [self.expression(0)]
            while self.peek()[1] == ",":
                self.advance()
                args.append(self.expression(0))
            self.expect(")")
            if len(args) != FUNCTIONS[name]:
                raise ParseError(
                    f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", pos, self.source
                )
            return Call(name, *args)
        if nxt[1] == "(":
            raise UnknownIdentifierError(f"unknown function {name!r}", pos, self.source)
        if name in CONSTANTS:
            return Const(CONSTANTS[name])
        if name not in self.registry:
            raise UnknownIdentifierError(f"unknown identifier {name!r}", pos, self.source)
        return Var(name)


def parse(source: str, registry: Registry | None = None) -> Expr:
    """Parse an infix formula into an (unsimplified) expression tree."""
    if not isinstance(source, str):
        raise TypeError("source must be a string")
    return _Parser(source, registry or DEFAULT).parse()
