"""Expression language for chart coefficients.

Grammar (highest binding first)::

    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
    power  := atom ['^' unary]              # right associative
    unary  := '-' unary | power
    term   := unary (('*' | '/') unary)*    # left associative
    expr   := term (('+' | '-') term)*      # left associative

``**`` is accepted as a spelling of ``^`` and ``pi`` is a numeric literal.
Literals are stored non-negative; a leading minus is always a ``Neg`` node,
which keeps ``parse(to_text(e)) == e``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

from ..errors import DomainError, ExprSyntaxError, UnknownIdentifierError
from . import jet as J

FUNC_NAMES = frozenset(J.FUNCTIONS)
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"literal must be finite and non-negative, got {self.value!r}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


# -- tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if tok == "**":
                tok = "^"
            out.append((kind, tok, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, names: frozenset[str] | None):
        self.text = text
        self.names = names
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, pos):
        raise ExprSyntaxError(msg, _byte_offset(self.text, pos), self.text)

    def expect(self, tok):
        kind, t, pos = self.take()
        if t != tok or kind == "end":
            self.fail(f"expected {tok!r}, found {t or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, t, pos = self.peek()
        if kind != "end":
            self.fail(f"unexpected token {t!r}", pos)
        return e

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        kind, t, _ = self.peek()
        if kind == "op" and t == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, t, _ = self.peek()
        if kind == "op" and t == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, t, pos = self.take()
        if kind == "num":
            return Num(float(t))
        if kind == "name":
            if t in FUNC_NAMES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t, arg)
            if t in CONSTANTS:
                return Num(CONSTANTS[t])
            if self.names is not None and t not in self.names:
                raise UnknownIdentifierError(t, _byte_offset(self.text, pos))
            return Var(t)
        if kind == "op" and t == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            self.fail("unexpected end of input", pos)
        self.fail(f"unexpected token {t!r}", pos)


def parse(text: str, names: Iterable[str] | None = None) -> Expr:
    """Parse ``text``; if ``names`` is given, identifiers must be among them."""
    allowed = None if names is None else frozenset(names)
    return _Parser(text, allowed).parse()


# -- printer --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3
_ATOM_PREC = 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _fmt_num(v: float) -> str:
    if v.is_integer() and v < 1e15:
        return str(int(v))
    return repr(v)


def to_text(e: Expr) -> str:
    """Minimal-parenthesis rendering that parses back to the same tree."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        return "-" + (f"({inner})" if _prec(e.operand) < _NEG_PREC else inner)
    p = _PREC[e.op]
    left, right = to_text(e.left), to_text(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _NEG_PREC:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def free_names(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg, Call)):
        return free_names(e.operand if isinstance(e, Neg) else e.arg)
    return free_names(e.left) | free_names(e.right)


# -- compilation to closures ----------------------------------------------------


def compile_expr(e: Expr, coords: Sequence[str]) -> Callable[[list], object]:
    """Turn ``e`` into ``fn(vars) -> number`` over positional coordinate values.

    ``vars`` may hold floats or (nested) jets.  Domain violations raise
    :class:`DomainError` naming the offending sub-expression; the caller adds
    the point.
    """
    index = {name: i for i, name in enumerate(coords)}
    missing = free_names(e) - set(index)
    if missing:
        raise UnknownIdentifierError(sorted(missing)[0])
    return _compile(e, index)


def _compile(e: Expr, index: dict[str, int]):
    if isinstance(e, Num):
        v = e.value
        return lambda xs: v
    if isinstance(e, Var):
        i = index[e.name]
        return lambda xs: xs[i]
    if isinstance(e, Neg):
        f = _compile(e.operand, index)
        return lambda xs: -f(xs)
    if isinstance(e, Call):
        return _compile_call(e, _compile(e.arg, index))
    lf, rf = _compile(e.left, index), _compile(e.right, index)
    if e.op == "+":
        return lambda xs: lf(xs) + rf(xs)
    if e.op == "-":
        return lambda xs: lf(xs) - rf(xs)
    if e.op == "*":
        return lambda xs: lf(xs) * rf(xs)
    if e.op == "/":
        def div(xs):
            den = rf(xs)
            if J.scalar(den) == 0.0:
                raise DomainError(to_text(e), reason="division by zero")
            return lf(xs) / den

        return div
    return _compile_pow(e, lf, rf)


def _compile_call(e: Call, af):
    fn = J.FUNCTIONS[e.func]
    name = e.func

    def call(xs):
        a = af(xs)
        s = J.scalar(a)
        if name == "log" and s <= 0.0:
            raise DomainError(to_text(e), reason="log of non-positive value")
        if name == "sqrt" and (s < 0.0 or (s == 0.0 and isinstance(a, J.Jet))):
            raise DomainError(to_text(e), reason="sqrt outside differentiable domain")
        try:
            out = fn(a)
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise DomainError(to_text(e), reason=str(exc)) from None
        if not math.isfinite(J.scalar(out)):
            raise DomainError(to_text(e), reason="non-finite value")
        return out

    return call


def _compile_pow(e: BinOp, lf, rf):
    if isinstance(e.right, Num) or (isinstance(e.right, Neg) and isinstance(e.right.operand, Num)):
        c = e.right.value if isinstance(e.right, Num) else -e.right.operand.value
        integral = float(c).is_integer()

        def const_pow(xs):
            b = lf(xs)
            s = J.scalar(b)
            if s < 0.0 and not integral:
                raise DomainError(to_text(e), reason="negative base with non-integer exponent")
            if s == 0.0 and (c < 0 or (isinstance(b, J.Jet) and 0 < c < 1)):
                raise DomainError(to_text(e), reason="power singular at zero")
            try:
                return J.power(b, c)
            except (OverflowError, ZeroDivisionError) as exc:
                raise DomainError(to_text(e), reason=str(exc)) from None

        return const_pow

    def gen_pow(xs):
        b = lf(xs)
        if J.scalar(b) <= 0.0:
            raise DomainError(to_text(e), reason="non-positive base with variable exponent")
        try:
            return J.exp(rf(xs) * J.log(b))
        except OverflowError as exc:
            raise DomainError(to_text(e), reason=str(exc)) from None

    return gen_pow


class Compiled:
    """Parsed expression bound to a coordinate list."""

    def __init__(self, source: str | Expr, coords: Sequence[str]):
        self.coords = tuple(coords)
        self.expr = parse(source, self.coords) if isinstance(source, str) else source
        self._fn = compile_expr(self.expr, self.coords)

    @cached_property
    def text(self) -> str:
        return to_text(self.expr)

    def __call__(self, xs):
        return self._fn(xs)

    def __repr__(self):
        return f"Compiled({self.text!r})"
