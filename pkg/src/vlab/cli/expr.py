"""Arithmetic expressions over a field: ``1/s + u^2``, ``X^2 - (1+t)``.

Parsed with :mod:`ast` after translating ``^`` to ``**``; only numbers,
generator names and the operators ``+ - * / **`` are evaluated.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from ..fieldtower.base import Field, FieldElement
from ..fieldtower.poly import Poly
from ..errors import VlabError


class ExpressionError(VlabError, ValueError):
    def __init__(self, message: str, col: int | None = None):
        self.col = col
        super().__init__(message if col is None else f"col {col}: {message}")


_OPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.Pow: "**"}


def _tree(text: str):
    try:
        return ast.parse(text.replace("^", "**").strip(), mode="eval").body
    except SyntaxError as exc:
        raise ExpressionError(exc.msg, exc.offset) from None


def _eval(node, leaf):
    col = getattr(node, "col_offset", 0) + 1
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return leaf(node.value, col)
    if isinstance(node, ast.Name):
        return leaf(node.id, col)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        x = _eval(node.operand, leaf)
        return -x if isinstance(node.op, ast.USub) else x
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        if isinstance(node.op, ast.Pow):
            n = node.right
            sign = 1
            if isinstance(n, ast.UnaryOp) and isinstance(n.op, ast.USub):
                n, sign = n.operand, -1
            if not (isinstance(n, ast.Constant) and type(n.value) is int):
                raise ExpressionError("exponents must be integer literals", col)
            return _eval(node.left, leaf) ** (sign * n.value)
        a, b = _eval(node.left, leaf), _eval(node.right, leaf)
        op = _OPS[type(node.op)]
        try:
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return a / b
        except ZeroDivisionError:
            raise ExpressionError("division by zero", col) from None
    raise ExpressionError(f"unsupported syntax {type(node).__name__}", col)


def parse_element(F: Field, text: str) -> FieldElement:
    """Evaluate ``text`` in ``F``; names are the generators of the tower."""
    gens = F.gens()

    def leaf(x, col):
        if isinstance(x, int):
            return F.coerce(x)
        if x in gens:
            return gens[x]
        raise ExpressionError(f"unknown name '{x}' (known: {', '.join(sorted(gens)) or 'none'})", col)

    try:
        return F.coerce(_eval(_tree(text), leaf))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ExpressionError):
            raise
        raise ExpressionError(str(exc)) from None


def parse_poly(F: Field, text: str, var: str = "X") -> Poly:
    """A polynomial in ``var`` with coefficients in ``F``; division only by constants."""
    gens = F.gens()
    X = Poly.x(F)

    def const(p: Poly):
        if p.degree > 0:
            raise ExpressionError("division by a non-constant polynomial")
        return p[0]

    class P:
        # thin wrapper so int and element operands lift to polynomials
        __slots__ = ("p",)

        def __init__(self, p):
            self.p = p

        def __add__(self, o):
            return P(self.p + o.p)

        def __sub__(self, o):
            return P(self.p - o.p)

        def __mul__(self, o):
            return P(self.p * o.p)

        def __truediv__(self, o):
            c = const(o.p)
            if c.is_zero():
                raise ZeroDivisionError
            return P(self.p.scale(c.inverse()))

        def __neg__(self):
            return P(-self.p)

        def __pow__(self, n):
            if n < 0:
                c = const(self.p)
                return P(Poly(F, [c ** n]))
            return P(self.p ** n)

    def leaf(x, col):
        if isinstance(x, int):
            return P(Poly(F, [Fraction(x)]))
        if x == var:
            return P(X)
        if x in gens:
            return P(Poly(F, [gens[x]]))
        raise ExpressionError(f"unknown name '{x}'", col)

    return _eval(_tree(text), leaf).p
