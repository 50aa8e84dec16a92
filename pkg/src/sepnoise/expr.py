"""A small expression language for time-dependent coefficients.

Grammar (standard precedence, ``^`` is right-associative, unary minus binds
tighter than ``^``)::

    expr   := term (('+' | '-') term)*
    term   := power (('*' | '/') power)*
    power  := unary ('^' power)?
    unary  := '-' unary | atom
    atom   := NUMBER | 'pi' | 't' | NAME '(' expr (',' expr)* ')' | '(' expr ')'

Known functions: ``sin cos exp sqrt pow``.  Evaluation is vectorized over
numpy arrays of ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

_FUNCTIONS = {
    "sin": (np.sin, 1),
    "cos": (np.cos, 1),
    "exp": (np.exp, 1),
    "sqrt": (np.sqrt, 1),
    "pow": (np.power, 2),
}


class ExprError(ValueError):
    """Base class for expression errors; ``position`` is a byte offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ExprSyntaxError(ExprError):
    pass


class ExprNameError(ExprError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class TimeVar:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Num | TimeVar | Const | Neg | BinOp | Call

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprSyntaxError(
                f"unexpected character {stripped[0]!r}",
                pos + (len(text[pos:]) - len(stripped)),
            )
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {value!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = BinOp(value, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.power()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = BinOp(value, node, self.power())
            else:
                return node

    def power(self) -> Node:
        node = self.unary()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", node, self.power())
        return node

    def unary(self) -> Node:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        kind, value, pos = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value == "t":
                return TimeVar()
            if value == "pi":
                return Const("pi")
            if value in _FUNCTIONS:
                _, arity = _FUNCTIONS[value]
                self.expect_op("(")
                args = [self.expr()]
                while True:
                    k, v, p = self.peek()
                    if k == "op" and v == ",":
                        self.advance()
                        args.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != arity:
                    raise ExprSyntaxError(
                        f"{value} takes {arity} argument(s), got {len(args)}", pos
                    )
                return Call(value, tuple(args))
            raise ExprNameError(f"unknown identifier {value!r}", pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            f"expected a value, got {value!r}" if value else "unexpected end of input",
            pos,
        )


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an AST; raises ``ExprSyntaxError``/``ExprNameError``."""
    return _Parser(text).parse()


def evaluate(node: Node, t):
    """Evaluate an AST at scalar or array ``t``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, TimeVar):
        return np.asarray(t, dtype=np.float64) if np.ndim(t) else float(t)
    if isinstance(node, Const):
        return np.pi
    if isinstance(node, Neg):
        return -evaluate(node.operand, t)
    if isinstance(node, BinOp):
        lhs = evaluate(node.left, t)
        rhs = evaluate(node.right, t)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            return lhs / rhs
        return np.power(lhs, rhs)
    func, _ = _FUNCTIONS[node.name]
    return func(*(evaluate(a, t) for a in node.args))


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def to_string(node: Node) -> str:
    """Render an AST back to source; ``parse_expr(to_string(x)) == x``."""
    return _render(node, 0)


def _render(node: Node, parent_prec: int) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, TimeVar):
        return "t"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_render(a, 0) for a in node.args)})"
    if isinstance(node, Neg):
        # unary minus binds tighter than ^, so its operand must be atomic
        inner = _render(node.operand, 4)
        text = f"-{inner}"
        return f"({text})" if parent_prec >= 4 else text
    prec = _PRECEDENCE[node.op]
    if node.op == "^":
        # right-associative; left operand is at the unary level
        left = _render(node.left, 4)
        right = _render(node.right, prec)
        text = f"{left}^{right}"
    else:
        left = _render(node.left, prec)
        right = _render(node.right, prec + 1)
        text = f"{left} {node.op} {right}"
    return f"({text})" if parent_prec > prec else text
