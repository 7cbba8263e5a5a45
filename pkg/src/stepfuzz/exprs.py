"""Tiny rational expression trees for band endpoints.

Endpoints of parametric families ("1 - 1/(3*n)", "alpha - 2") are kept
symbolic so they can be instantiated exactly at any rational parameter value.
Literals remember the lexeme they were written with, letting a document
round-trip through print without rewriting 0.6 as 3/5; the lexeme does not
participate in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import EvalError
from .spatial import INF, NEG_INF, ExtendedReal, as_real


@dataclass(frozen=True)
class Lit:
    value: Fraction
    text: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.text:
            object.__setattr__(self, "text", str(self.value))

    @staticmethod
    def of(x) -> "Lit":
        v = as_real(x)
        if not isinstance(v, Fraction):
            raise EvalError(f"literal must be finite, got {x!r}")
        if isinstance(x, str):
            return Lit(v, x)
        return Lit(v)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in "+-*/":
            raise EvalError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class PosInf:
    pass


@dataclass(frozen=True)
class NegInf:
    pass


Expr = Union[Lit, Var, Neg, BinOp, PosInf, NegInf]


def evaluate(e: Expr, env: Mapping[str, Fraction] | None = None) -> ExtendedReal:
    """Evaluate exactly over the rationals extended with the two infinities.

    Indeterminate results (division by zero, 0 * inf, inf - inf) raise
    EvalError instead of producing a junk value.
    """
    env = env or {}
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, PosInf):
        return INF
    if isinstance(e, NegInf):
        return NEG_INF
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, BinOp):
        a = evaluate(e.left, env)
        b = evaluate(e.right, env)
        try:
            if e.op == "+":
                r = a + b
            elif e.op == "-":
                r = a - b
            elif e.op == "*":
                r = a * b
            else:
                if b == 0:
                    raise EvalError("division by zero")
                r = a / b
        except (ZeroDivisionError, OverflowError) as exc:
            raise EvalError(str(exc)) from None
        if isinstance(r, float) and r != r:
            raise EvalError(f"indeterminate value from {e.op!r}")
        return r
    raise EvalError(f"not an expression: {e!r}")


def free_vars(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return free_vars(e.operand)
    if isinstance(e, BinOp):
        return free_vars(e.left) | free_vars(e.right)
    return set()


def substitute(e: Expr, env: Mapping[str, Fraction]) -> Expr:
    """Replace variables by literal values, leaving other structure intact."""
    if isinstance(e, Var) and e.name in env:
        return Lit(Fraction(env[e.name]))
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, env))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, env), substitute(e.right, env))
    return e


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(e: Expr) -> str:
    """Render with minimal parentheses; additive operators are spaced."""
    if isinstance(e, Lit):
        return e.text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, PosInf):
        return "inf"
    if isinstance(e, NegInf):
        return "-inf"
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        if isinstance(e.operand, (BinOp, Neg)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = to_text(e.left)
        right = to_text(e.right)
        if isinstance(e.left, BinOp) and _PREC[e.left.op] < p:
            left = f"({left})"
        if isinstance(e.left, Neg):
            left = f"({left})"
        if isinstance(e.right, BinOp) and (_PREC[e.right.op] < p
                                           or (_PREC[e.right.op] == p and e.op in "-/")):
            right = f"({right})"
        if isinstance(e.right, Neg):
            right = f"({right})"
        if e.op in "+-":
            return f"{left} {e.op} {right}"
        return f"{left}{e.op}{right}"
    raise EvalError(f"not an expression: {e!r}")


def const(x) -> Lit:
    return Lit.of(x)
