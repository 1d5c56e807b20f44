"""Tiny arithmetic expressions in one variable ``u`` with symbolic derivatives.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' unary)?
    atom  := number | 'u' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'

``name`` is one of sqrt, exp, log, sin, cos. Evaluation goes through numpy,
so arrays and complex arguments work.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


class ExprError(ValueError):
    pass


class Node:
    def __call__(self, u):
        return self.eval(np.asarray(u))

    def __add__(self, o):
        return _simplify(Bin("+", self, _lift(o)))

    def __sub__(self, o):
        return _simplify(Bin("-", self, _lift(o)))

    def __mul__(self, o):
        return _simplify(Bin("*", self, _lift(o)))

    def __truediv__(self, o):
        return _simplify(Bin("/", self, _lift(o)))

    def __neg__(self):
        return _simplify(Neg(self))


def _lift(x):
    return x if isinstance(x, Node) else Const(float(x))


@dataclass(frozen=True)
class Const(Node):
    value: float

    def eval(self, u):
        return np.full(np.shape(u), self.value) if np.ndim(u) else self.value

    def diff(self):
        return Const(0.0)

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Node):
    def eval(self, u):
        return u

    def diff(self):
        return Const(1.0)

    def __str__(self):
        return "u"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def eval(self, u):
        return -self.arg.eval(u)

    def diff(self):
        return -self.arg.diff()

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class Bin(Node):
    op: str
    a: Node
    b: Node

    def eval(self, u):
        x, y = self.a.eval(u), self.b.eval(u)
        if self.op == "+":
            return x + y
        if self.op == "-":
            return x - y
        if self.op == "*":
            return x * y
        if self.op == "/":
            return x / y
        return np.power(x, y)

    def diff(self):
        a, b = self.a, self.b
        da, db = a.diff(), b.diff()
        if self.op == "+":
            return da + db
        if self.op == "-":
            return da - db
        if self.op == "*":
            return da * b + a * db
        if self.op == "/":
            return (da * b - a * db) / (b * b)
        if isinstance(b, Const):
            return Const(b.value) * _simplify(Bin("^", a, Const(b.value - 1.0))) * da
        return self * (db * Func("log", a) + b * da / a)

    def __str__(self):
        return f"({self.a} {self.op} {self.b})"


_FUNCS = {"sqrt": np.sqrt, "exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos}


@dataclass(frozen=True)
class Func(Node):
    name: str
    arg: Node

    def eval(self, u):
        return _FUNCS[self.name](self.arg.eval(u))

    def diff(self):
        a, da = self.arg, self.arg.diff()
        if self.name == "sqrt":
            outer = Const(0.5) / self
        elif self.name == "exp":
            outer = self
        elif self.name == "log":
            outer = Const(1.0) / a
        elif self.name == "sin":
            outer = Func("cos", a)
        else:
            outer = -Func("sin", a)
        return outer * da

    def __str__(self):
        return f"{self.name}({self.arg})"


def _simplify(n: Node) -> Node:
    if isinstance(n, Neg) and isinstance(n.arg, Const):
        return Const(-n.arg.value)
    if not isinstance(n, Bin):
        return n
    a, b = n.a, n.b
    ca = a.value if isinstance(a, Const) else None
    cb = b.value if isinstance(b, Const) else None
    if ca is not None and cb is not None:
        return Const(float(Bin(n.op, a, b).eval(np.float64(0.0))))
    if n.op == "+":
        if ca == 0.0:
            return b
        if cb == 0.0:
            return a
    if n.op == "-":
        if cb == 0.0:
            return a
        if ca == 0.0:
            return Neg(b)
    if n.op == "*":
        if ca == 0.0 or cb == 0.0:
            return Const(0.0)
        if ca == 1.0:
            return b
        if cb == 1.0:
            return a
    if n.op == "/" and cb == 1.0:
        return a
    if n.op == "^" and cb == 1.0:
        return a
    if n.op == "^" and cb == 0.0:
        return Const(1.0)
    return n


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ExprError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
            num, name, op = m.groups()
            self.tokens.append(("num", float(num)) if num else ("name", name) if name else ("op", "^" if op == "**" else op))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ExprError(f"expected {value or kind} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        if not self.tokens:
            raise ExprError("empty expression")
        node = self.expr()
        if self.i != len(self.tokens):
            raise ExprError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = _simplify(Bin(op, node, self.term()))
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = _simplify(Bin(op, node, self.unary()))
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _simplify(Neg(self.unary()))
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return _simplify(Bin("^", base, self.unary()))
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Const(val)
        if kind == "name":
            self.take()
            if val == "u":
                return Var()
            if val == "pi":
                return Const(math.pi)
            if val == "e":
                return Const(math.e)
            if val in _FUNCS:
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return _simplify(Func(val, arg))
            raise ExprError(f"unknown name {val!r}")
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ExprError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str) -> Node:
    """Parse an expression in ``u``; raises ExprError on bad input."""
    return _Parser(text).parse()
