"""Scalar expression language used by manifold spec files.

Grammar (``^`` binds tightest and is right associative)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"

Identifiers are either declared chart variables, the constant ``pi``, or one
of the functions ``sin cos exp log sqrt tanh``.  Parsed trees are immutable
and can be evaluated either on floats or on :class:`~chenverify.jet.Jet2`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .jet import Jet2, JetDomainError, jet_arith, jet_const, jet_seed, jet_unary

__all__ = [
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "ArityError",
    "ExprEvalError",
    "Num",
    "Var",
    "Unary",
    "BinOp",
    "ExprAst",
    "ExprMatrix",
    "FUNCTIONS",
    "parse",
    "to_text",
    "eval_jet",
    "eval_float",
    "is_constant",
    "constant_value",
    "variable_names",
]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "tanh")
_CONSTANTS = {"pi": math.pi}


class ExprError(ValueError):
    """Base class for expression parse errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class ArityError(ExprError):
    def __init__(self, fn: str, offset: int):
        self.fn = fn
        self.offset = offset
        super().__init__(f"function {fn!r} takes exactly one argument (offset {offset})")


class ExprEvalError(ValueError):
    """Evaluation failure annotated with the offending source expression."""

    def __init__(self, source: str, cause: Exception):
        self.source = source
        self.cause = cause
        super().__init__(f"while evaluating {source!r}: {cause}")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class Unary:
    fn: str  # one of FUNCTIONS or "neg"
    arg: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: "ExprAst"
    right: "ExprAst"


ExprAst = Union[Num, Var, Unary, BinOp]


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = {name: i for i, name in enumerate(variables)}

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, tok, offset = self.peek()
        if tok != value or kind != "op":
            what = "end of input" if kind == "end" else repr(tok)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", offset, self.text)
        return self.advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        kind, tok, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {tok!r}", offset, self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self):
        kind, tok, offset = self.advance()
        if kind == "number":
            return Num(float(tok))
        if kind == "ident":
            if tok in FUNCTIONS:
                if self.peek()[:2] != ("op", "("):
                    raise ArityError(tok, offset)
                self.advance()
                arg = self.expr()
                if self.peek()[:2] == ("op", ","):
                    raise ArityError(tok, offset)
                self.expect(")")
                return Unary(tok, arg)
            if tok in self.variables:
                if self.peek()[:2] == ("op", "("):
                    raise ExprSyntaxError(f"{tok!r} is not a function", self.peek()[2], self.text)
                return Var(tok, self.variables[tok])
            if tok in _CONSTANTS:
                return Num(_CONSTANTS[tok])
            raise UnknownIdentifierError(tok, offset)
        if kind == "op" and tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(tok)
        raise ExprSyntaxError(f"unexpected {what}", offset, self.text)


def parse(text: str, variables: Sequence[str]) -> ExprAst:
    """Parse ``text`` into an immutable AST over the declared ``variables``."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    return _Parser(text, list(variables)).parse()


# ---------------------------------------------------------------------------
# printer

def _num_text(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot print non-finite literal {value!r}")
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value)) if value >= 0 else f"({int(value)})"
    text = repr(value)
    return text if value >= 0 else f"({text})"


def to_text(node: ExprAst) -> str:
    """Fully parenthesised text that parses back to an identical tree."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.fn == "neg":
            return f"(-{to_text(node.arg)})"
        return f"{node.fn}({to_text(node.arg)})"
    return f"({to_text(node.left)}{node.op}{to_text(node.right)})"


# ---------------------------------------------------------------------------
# evaluation

def is_constant(node: ExprAst) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Unary):
        return is_constant(node.arg)
    return is_constant(node.left) and is_constant(node.right)


def variable_names(node: ExprAst) -> set[str]:
    if isinstance(node, Num):
        return set()
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return variable_names(node.arg)
    return variable_names(node.left) | variable_names(node.right)


_BINOP_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}


def _eval_jet(node, seeds, dim):
    if isinstance(node, Num):
        return jet_const(node.value, dim)
    if isinstance(node, Var):
        return seeds[node.index]
    if isinstance(node, Unary):
        return jet_unary(node.fn, _eval_jet(node.arg, seeds, dim))
    return jet_arith(
        _BINOP_NAMES[node.op], _eval_jet(node.left, seeds, dim), _eval_jet(node.right, seeds, dim)
    )


def eval_jet(ast: ExprAst, point) -> Jet2:
    """Evaluate ``ast`` over coordinate jets seeded at ``point``."""
    point = np.asarray(point, dtype=float).ravel()
    seeds = [jet_seed(point, i) for i in range(point.shape[0])]
    try:
        return _eval_jet(ast, seeds, point.shape[0])
    except (JetDomainError, ZeroDivisionError, OverflowError) as exc:
        raise ExprEvalError(to_text(ast), exc) from exc
    except IndexError as exc:
        raise ValueError(
            f"expression references a variable beyond the {point.shape[0]} supplied coordinates"
        ) from exc


def _pow_float(a: float, b: float) -> float:
    if float(b).is_integer():
        return a ** int(b)
    if a <= 0.0:
        raise JetDomainError("pow", a, f"pow: non-integer power of non-positive base {a!r}")
    return math.exp(b * math.log(a))


def _eval_float(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(x[node.index])
    if isinstance(node, Unary):
        v = _eval_float(node.arg, x)
        if node.fn == "neg":
            return -v
        if node.fn in ("log", "sqrt") and v <= 0.0:
            raise JetDomainError(node.fn, v)
        return getattr(math, node.fn)(v)
    a = _eval_float(node.left, x)
    b = _eval_float(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return _pow_float(a, b)


def eval_float(ast: ExprAst, point) -> float:
    """Plain floating point evaluation (no derivatives)."""
    try:
        return _eval_float(ast, np.asarray(point, dtype=float).ravel())
    except (JetDomainError, ZeroDivisionError, OverflowError) as exc:
        raise ExprEvalError(to_text(ast), exc) from exc


def constant_value(ast: ExprAst) -> float:
    return eval_float(ast, ())


# ---------------------------------------------------------------------------

ZERO = Num(0.0)


@dataclass(frozen=True)
class ExprMatrix:
    """Rectangular grid of expressions, e.g. metric entries or a J matrix."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples of ExprAst

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("ExprMatrix entries are not a rows x cols grid")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExprMatrix":
        return cls(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def from_texts(cls, texts, variables) -> "ExprMatrix":
        rows = tuple(tuple(parse(str(t), variables) for t in row) for row in texts)
        return cls(len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def from_array(cls, values) -> "ExprMatrix":
        values = np.asarray(values, dtype=float)
        return cls(
            values.shape[0],
            values.shape[1],
            tuple(tuple(Num(float(v)) for v in row) for row in values),
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def nonzero(self):
        """Yield ``(i, j, ast)`` for entries that are not the literal zero."""
        for i, row in enumerate(self.entries):
            for j, ast in enumerate(row):
                if not (isinstance(ast, Num) and ast.value == 0.0):
                    yield i, j, ast

    def evaluate(self, point) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        for i, j, ast in self.nonzero():
            out[i, j] = eval_float(ast, point)
        return out
