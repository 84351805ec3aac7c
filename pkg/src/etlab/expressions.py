"""Scalar expressions over chart coordinates and their expansion into jets.

Expressions are small immutable trees.  They can be built with Python
operators (``x1 ** 2 + sin(x2)``) or parsed from infix strings where ``^``
denotes a power and the functions ``sqrt exp log sin cos`` are available.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ExpressionSyntaxError
from .jets import DEFAULT_ORDER, Jet, JetSpace, jet_space

FUNCTIONS = ("sqrt", "exp", "log", "sin", "cos")
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base node.  Subclasses are frozen dataclasses."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, p):
        if isinstance(p, Expr):
            if not isinstance(p, Const):
                raise TypeError("exponents must be numeric constants")
            p = p.value
        return Pow(self, float(p))

    def variables(self) -> set[int]:
        out: set[int] = set()
        for child in self.children():
            out |= child.variables()
        return out

    def children(self) -> tuple["Expr", ...]:
        return ()

    def evaluate(self, point: Sequence[float]) -> float:
        """Plain floating-point value at ``point``."""
        space = jet_space(max(len(point), 1), 0)
        return float(_eval(self, space, np.asarray(point, dtype=float), 0, {})[0])


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: float

    def __str__(self):
        return repr(float(self.value)) if not float(self.value).is_integer() else str(int(self.value))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int
    name: str

    def variables(self):
        return {self.index}

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class _Binary(Expr):
    left: Expr
    right: Expr
    symbol = "?"

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


class Add(_Binary):
    symbol = "+"


class Sub(_Binary):
    symbol = "-"


class Mul(_Binary):
    symbol = "*"


class Div(_Binary):
    symbol = "/"


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def children(self):
        return (self.base,)

    def __str__(self):
        p = self.exponent
        ptxt = str(int(p)) if float(p).is_integer() else repr(p)
        return f"({self.base}^{ptxt})"


@dataclass(frozen=True, eq=True)
class Call(Expr):
    func: str
    arg: Expr

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"{self.func}({self.arg})"


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, np.integer, np.floating)):
        return Const(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def sqrt(x) -> Expr:
    return Call("sqrt", as_expr(x))


def exp(x) -> Expr:
    return Call("exp", as_expr(x))


def log(x) -> Expr:
    return Call("log", as_expr(x))


def sin(x) -> Expr:
    return Call("sin", as_expr(x))


def cos(x) -> Expr:
    return Call("cos", as_expr(x))


def coordinates(names: Sequence[str]) -> tuple[Var, ...]:
    return tuple(Var(i, n) for i, n in enumerate(names))


# -- evaluation ----------------------------------------------------------------


def _eval(node: Expr, space: JetSpace, point: np.ndarray, order: int, memo: dict) -> np.ndarray:
    key = id(node)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    out = _eval_node(node, space, point, order, memo)
    memo[key] = (node, out)  # keep node alive so id() stays unique
    return out


def _eval_node(node, space, point, order, memo):
    if isinstance(node, Const):
        return space.constant(node.value, order)
    if isinstance(node, Var):
        if node.index >= len(point):
            raise DomainError(f"variable {node.name} has no coordinate", node=node)
        return space.variable(node.index, point[node.index], order)
    if isinstance(node, Neg):
        return -_eval(node.arg, space, point, order, memo)
    if isinstance(node, _Binary):
        a = _eval(node.left, space, point, order, memo)
        b = _eval(node.right, space, point, order, memo)
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return space.mul(a, b)
        if b[0] == 0.0:
            raise DomainError(f"division by zero in {node}", node=node, point=tuple(point))
        return space.mul(a, space.recip(b))
    if isinstance(node, Pow):
        a = _eval(node.base, space, point, order, memo)
        p = node.exponent
        if not float(p).is_integer() and a[0] <= 0.0:
            raise DomainError(
                f"non-integer power of non-positive value {a[0]:.6g} in {node}",
                node=node, point=tuple(point),
            )
        if float(p).is_integer() and p < 0 and a[0] == 0.0:
            raise DomainError(f"division by zero in {node}", node=node, point=tuple(point))
        return space.power(a, p)
    if isinstance(node, Call):
        a = _eval(node.arg, space, point, order, memo)
        v = a[0]
        if node.func == "log" and v <= 0.0:
            raise DomainError(f"log of non-positive value {v:.6g} in {node}", node=node, point=tuple(point))
        if node.func == "sqrt" and (v < 0.0 or (v == 0.0 and order > 0)):
            raise DomainError(f"sqrt of invalid value {v:.6g} in {node}", node=node, point=tuple(point))
        return getattr(space, node.func)(a)
    raise TypeError(f"unknown node {node!r}")


def lift_array(expr: Expr, point: Sequence[float], order: int, space: JetSpace | None = None) -> np.ndarray:
    """Coefficient array of the jet of ``expr`` at ``point``."""
    point = np.asarray(point, dtype=float)
    if space is None:
        space = jet_space(len(point), order)
    return _eval(expr, space, point, order, {})


def lift(expr: Expr, point: Sequence[float], order: int = DEFAULT_ORDER) -> Jet:
    """Expand ``expr`` into an order-``order`` jet at ``point``."""
    space = jet_space(len(point), order)
    return Jet(space, lift_array(expr, point, order, space))


# -- parsing -------------------------------------------------------------------


def parse_expression(text: str, coord_names: Sequence[str]) -> Expr:
    """Parse an infix expression string over the given coordinate names.

    Grammar: numbers, coordinate names, ``pi``, ``e``, ``+ - * / ^`` (``**``
    also accepted), parentheses and one-argument calls to
    ``sqrt exp log sin cos``.  Exponents must be numeric constants.
    """
    if not isinstance(text, str):
        if isinstance(text, (int, float)):
            return Const(float(text))
        raise ExpressionSyntaxError(f"expression must be a string, got {type(text).__name__}")
    src = text.replace("^", "**")
    # per line: column in src -> column in text (undoes the '^' -> '**' widening)
    colmaps = []
    for line in text.split("\n"):
        cmap = []
        for k, ch in enumerate(line):
            cmap.extend([k, k] if ch == "^" else [k])
        cmap.append(len(line))
        colmaps.append(cmap)

    lead = len(src) - len(src.lstrip())

    def origin(lineno, col):
        if lineno == 1:
            col += lead
        cmap = colmaps[min(max(lineno, 1), len(colmaps)) - 1]
        return lineno, cmap[min(col, len(cmap) - 1)] + 1

    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        line, col = origin(exc.lineno or 1, max((exc.offset or 1) - 1, 0))
        raise ExpressionSyntaxError(f"cannot parse {text!r}: {exc.msg}", line, col) from None
    names = {n: i for i, n in enumerate(coord_names)}

    def fail(node, msg):
        line, col = origin(getattr(node, "lineno", 1), getattr(node, "col_offset", 0))
        raise ExpressionSyntaxError(msg, line, col)

    def build(node) -> Expr:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Const(float(node.value))
        if isinstance(node, ast.Name):
            if node.id in names:
                return Var(names[node.id], node.id)
            if node.id in CONSTANTS:
                return Const(CONSTANTS[node.id])
            fail(node, f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                arg = build(node.operand)
                return Const(-arg.value) if isinstance(arg, Const) else Neg(arg)
            if isinstance(node.op, ast.UAdd):
                return build(node.operand)
            fail(node, "unsupported unary operator")
        if isinstance(node, ast.BinOp):
            left = build(node.left)
            right = build(node.right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, Const):
                    right = _fold(right)
                    if right is None:
                        fail(node.right, "exponent must be a numeric constant")
                return Pow(left, right.value)
            ops = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}
            cls = ops.get(type(node.op))
            if cls is None:
                fail(node, "unsupported binary operator")
            return cls(left, right)
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                fail(node, "unsupported function call")
            if len(node.args) != 1 or node.keywords:
                fail(node, f"{node.func.id} takes exactly one argument")
            return Call(node.func.id, build(node.args[0]))
        fail(node, f"unsupported syntax {type(node).__name__}")

    return build(tree)


def _fold(expr: Expr) -> Const | None:
    """Reduce a coordinate-free subtree to a constant, else None."""
    if expr.variables():
        return None
    try:
        return Const(expr.evaluate([0.0]))
    except DomainError:
        return None
