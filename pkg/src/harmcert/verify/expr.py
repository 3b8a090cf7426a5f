"""Closed-form expression trees over pi, ln 2, Euler's gamma, Gamma at rationals and rationals.

Trees are built with ordinary operators::

    LN2 * G(1, 4) ** 2 / (4 * PI * sqrt(PI))

and evaluated at any precision with :meth:`Expr.evaluate`.  No floating-point
literals can enter a tree: numeric leaves are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..numcore import DomainError, PrecisionContext, fundamental_const
from ..special import gamma

OPERATIONS = frozenset({"const", "rational", "gamma", "add", "sub", "mul", "div", "neg", "pow"})

Operand = Union["Expr", int, Fraction]


def _lift(x: Operand) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Rational(Fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} in a closed-form expression")


class Expr:
    """Base node; subclasses implement ``_eval`` and ``__str__``."""

    def __add__(self, o: Operand) -> "Expr":
        return Binary("add", self, _lift(o))

    def __radd__(self, o: Operand) -> "Expr":
        return Binary("add", _lift(o), self)

    def __sub__(self, o: Operand) -> "Expr":
        return Binary("sub", self, _lift(o))

    def __rsub__(self, o: Operand) -> "Expr":
        return Binary("sub", _lift(o), self)

    def __mul__(self, o: Operand) -> "Expr":
        return Binary("mul", self, _lift(o))

    def __rmul__(self, o: Operand) -> "Expr":
        return Binary("mul", _lift(o), self)

    def __truediv__(self, o: Operand) -> "Expr":
        return Binary("div", self, _lift(o))

    def __rtruediv__(self, o: Operand) -> "Expr":
        return Binary("div", _lift(o), self)

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __pow__(self, e) -> "Expr":
        if not isinstance(e, (int, Fraction)) or isinstance(e, bool):
            raise TypeError("exponents must be rational")
        return Power(self, Fraction(e))

    def evaluate(self, ctx: PrecisionContext):
        w = ctx.extended(16)
        return ctx.mp.mpf(self._eval(w))

    def _eval(self, ctx: PrecisionContext):  # pragma: no cover - abstract
        raise NotImplementedError

    def operations(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Const(Expr):
    name: str

    def _eval(self, ctx):
        return fundamental_const(self.name, ctx)

    def operations(self):
        return {"const"}

    def __str__(self):
        return {"pi": "pi", "ln2": "ln2", "euler_gamma": "gamma_E"}[self.name]


@dataclass(frozen=True, eq=False)
class Rational(Expr):
    value: Fraction

    def _eval(self, ctx):
        return ctx.real(self.value)

    def operations(self):
        return {"rational"}

    def __str__(self):
        return str(self.value) if self.value >= 0 else f"({self.value})"


@dataclass(frozen=True, eq=False)
class GammaAt(Expr):
    arg: Fraction

    def _eval(self, ctx):
        return gamma(self.arg, ctx)

    def operations(self):
        return {"gamma"}

    def __str__(self):
        return f"Gamma({self.arg})"


_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


@dataclass(frozen=True, eq=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def _eval(self, ctx):
        a, b = self.left._eval(ctx), self.right._eval(ctx)
        if self.op == "add":
            return a + b
        if self.op == "sub":
            return a - b
        if self.op == "mul":
            return a * b
        if not b:
            raise DomainError("division by zero in closed form")
        return a / b

    def operations(self):
        return {self.op} | self.left.operations() | self.right.operations()

    def __str__(self):
        return f"({self.left} {_SYMBOL[self.op]} {self.right})"


@dataclass(frozen=True, eq=False)
class Neg(Expr):
    arg: Expr

    def _eval(self, ctx):
        return -self.arg._eval(ctx)

    def operations(self):
        return {"neg"} | self.arg.operations()

    def __str__(self):
        return f"-{self.arg}"


@dataclass(frozen=True, eq=False)
class Power(Expr):
    base: Expr
    exponent: Fraction

    def _eval(self, ctx):
        b = self.base._eval(ctx)
        e = self.exponent
        if e.denominator == 1:
            return b ** int(e)
        if b < 0:
            raise DomainError("fractional power of a negative number")
        mp = ctx.mp
        return mp.exp(ctx.real(e) * mp.log(b)) if b else mp.zero

    def operations(self):
        return {"pow"} | self.base.operations()

    def __str__(self):
        return f"{self.base}^({self.exponent})"


PI = Const("pi")
LN2 = Const("ln2")
EULER = Const("euler_gamma")


def Q(p: int, q: int = 1) -> Rational:
    return Rational(Fraction(p, q))


def G(p: int, q: int = 1) -> GammaAt:
    return GammaAt(Fraction(p, q))


def sqrt(x: Operand) -> Expr:
    return _lift(x) ** Fraction(1, 2)
