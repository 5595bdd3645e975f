"""A tiny expression language for user-defined normalized membership functions.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | atom
    atom  := NUMBER | 'x' | 'pi' | IDENT '(' expr (',' expr)* ')' | '(' expr ')'

Functions: ``abs cos sin sqrt`` (one argument) and ``min max`` (two).
Expressions describe the shape on ``[-1, 1]`` only; :func:`compile_mf`
zeroes everything outside and then validates the result.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MFSyntaxError, UnknownIdentifier
from .partition1d import DEFAULT_TOLERANCE, NormalizedMF, get_mf, registry_names, validate_mf


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "MFExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "MFExpr"
    right: "MFExpr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


MFExpr = Num | Var | Pi | Neg | BinOp | Call

FUNCTIONS: dict[str, tuple[int, Callable]] = {
    "abs": (1, np.abs),
    "cos": (1, np.cos),
    "sin": (1, np.sin),
    "sqrt": (1, np.sqrt),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
}

_START = frozenset({"number", "'x'", "'pi'", "function", "'('", "'-'"})
_OPS = frozenset({"'+'", "'-'", "'*'", "'/'"})
_END = "end of input"

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/(),])"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | ident | op | end
    text: str
    pos: int  # character offset


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = self._lex(text)
        self.i = 0

    def byte_offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def error(self, tok: _Tok, expected) -> MFSyntaxError:
        found = _END if tok.kind == "end" else repr(tok.text)
        return MFSyntaxError(self.byte_offset(tok.pos), expected, found)

    def _lex(self, text: str) -> list[_Tok]:
        toks, pos = [], 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise MFSyntaxError(self.byte_offset(pos), _START | _OPS | {"')'", "','"}, repr(text[pos]))
            if m.lastgroup != "ws":
                toks.append(_Tok(m.lastgroup, m.group(), pos))
            pos = m.end()
        toks.append(_Tok("end", "", len(text)))
        return toks

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def expect_close(self, closer: str, label: str) -> None:
        if self.tok.kind == "op" and self.tok.text == closer:
            self.advance()
            return
        raise self.error(self.tok, _OPS | {label})

    def parse(self) -> MFExpr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(self.tok, _OPS | {_END})
        return node

    def expr(self) -> MFExpr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> MFExpr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> MFExpr:
        if self.at_op("-"):
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> MFExpr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise MFSyntaxError(self.byte_offset(tok.pos), {"finite number"}, repr(tok.text))
            return Num(value)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text == "pi":
                return Pi()
            if tok.text not in FUNCTIONS:
                raise UnknownIdentifier(tok.text, self.byte_offset(tok.pos))
            return self.call(tok.text)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_close(")", "')'")
            return node
        raise self.error(tok, _START)

    def call(self, name: str) -> Call:
        arity = FUNCTIONS[name][0]
        if not self.at_op("("):
            raise self.error(self.tok, {"'('"})
        self.advance()
        args = [self.expr()]
        while len(args) < arity:
            self.expect_close(",", "','")
            args.append(self.expr())
        self.expect_close(")", "')'")
        return Call(name, tuple(args))


def parse_mf(text: str) -> MFExpr:
    """Parse an expression in ``x``; errors carry a byte offset."""
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 4


def pretty(node: MFExpr) -> str:
    """Canonical text for ``node`` with the fewest parentheses that re-parse to it."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Neg):
        inner = pretty(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < 3 else inner)
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left, right = pretty(node.left), pretty(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(pretty(a) for a in node.args) + ")"
    raise TypeError(f"not an expression node: {node!r}")


def evaluator(node: MFExpr) -> Callable[[np.ndarray], np.ndarray]:
    """Compile ``node`` to a vectorized function of ``x``."""
    if isinstance(node, Num):
        v = node.value
        return lambda x: np.full(np.shape(x), v)
    if isinstance(node, Var):
        return lambda x: np.asarray(x, dtype=float)
    if isinstance(node, Pi):
        return lambda x: np.full(np.shape(x), math.pi)
    if isinstance(node, Neg):
        f = evaluator(node.operand)
        return lambda x: -f(x)
    if isinstance(node, BinOp):
        f, g = evaluator(node.left), evaluator(node.right)
        op = {"+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide}[node.op]
        return lambda x: op(f(x), g(x))
    if isinstance(node, Call):
        fn = FUNCTIONS[node.name][1]
        parts = [evaluator(a) for a in node.args]
        return lambda x: fn(*(p(x) for p in parts))
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: MFExpr, x):
    arr = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = evaluator(node)(arr)
    return float(out) if arr.ndim == 0 else out


def compile_mf(node: MFExpr, name: str | None = None, tolerance: float = DEFAULT_TOLERANCE) -> NormalizedMF:
    """Admit an expression as a normalized membership function.

    The shape is taken as ``expr(x)`` for ``|x| < 1`` and zero elsewhere, then
    validated; division by zero or domain errors surface as an
    ``evaluation`` violation of :class:`~ruspini.errors.InvalidMF`.
    """
    f = evaluator(node)

    def eta(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 1.0
        return np.where(inside, f(np.where(inside, x, 0.0)), 0.0)

    mf = NormalizedMF(eta, name or pretty(node))
    return validate_mf(mf, tolerance)


def mf_from_spec(spec: str, tolerance: float = DEFAULT_TOLERANCE) -> NormalizedMF:
    """A registered name (``triangular``, ``cosine``, ...) or an expression in ``x``."""
    key = spec.strip()
    if key in registry_names():
        return get_mf(key)
    return compile_mf(parse_mf(key), tolerance=tolerance)


def canonical_spec(spec: str) -> str:
    key = spec.strip()
    if key in registry_names():
        return key
    return pretty(parse_mf(key))
