"""Second-order jets: value, gradient and Hessian carried through arithmetic.

A :class:`Jet2` behaves like a float under ``+ - * /`` and integer powers,
so metric components written once in plain Python evaluate either to
numbers or to their full 2-jets.
"""

from __future__ import annotations

import math
from numbers import Real

import numpy as np


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, c: float, n: int) -> "Jet2":
        return cls(c, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, a: float, i: int, n: int) -> "Jet2":
        g = np.zeros(n)
        g[i] = 1.0
        return cls(a, g, np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        if isinstance(other, Real):
            return Jet2.constant(float(other), self.n)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Real):
            return Jet2(self.value + other, self.grad, self.hess)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return Jet2(self.value * other, self.grad * other, self.hess * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        cross = np.outer(self.grad, o.grad)
        return Jet2(
            self.value * o.value,
            self.value * o.grad + o.value * self.grad,
            self.value * o.hess + o.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        v = self.value
        if v == 0:
            raise ZeroDivisionError("division by a jet with zero value")
        return self.compose(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if isinstance(other, Real):
            if other == 0:
                raise ZeroDivisionError("division of a jet by zero")
            return self * (1.0 / other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if isinstance(k, int) or (isinstance(k, float) and k.is_integer()):
            k = int(k)
            if k < 0:
                return (self ** (-k)).reciprocal()
            if k == 0:
                return Jet2.constant(1.0, self.n)
            v = self.value
            return self.compose(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2) if k > 1 else 0.0)
        v = self.value
        if v <= 0:
            raise ValueError("non-integer power of a jet needs a positive value")
        return self.compose(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))

    def compose(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Apply a univariate function given its value and first two derivatives at ``self.value``."""
        return Jet2(f0, f1 * self.grad, f1 * self.hess + f2 * np.outer(self.grad, self.grad))

    def __repr__(self):
        return f"Jet2({self.value!r}, grad={self.grad.tolist()!r})"


def exp(x):
    if isinstance(x, Jet2):
        e = math.exp(x.value)
        return x.compose(e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet2):
        v = x.value
        return x.compose(math.log(v), 1.0 / v, -1.0 / v**2)
    return math.log(x)


def sin(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return x.compose(s, c, -s)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return x.compose(c, -s, -c)
    return math.cos(x)


def seed(point) -> list[Jet2]:
    """Coordinate jets ``x_i`` at ``point``."""
    n = len(point)
    return [Jet2.variable(float(a), i, n) for i, a in enumerate(point)]


def unpack(rows, n: int):
    """Split a square nested list of jets/numbers into value, gradient and Hessian arrays.

    Shapes are ``(a, a)``, ``(n, a, a)`` and ``(n, n, a, a)``: derivative
    axes come first.
    """
    a = len(rows)
    val = np.zeros((a, a))
    grad = np.zeros((n, a, a))
    hess = np.zeros((n, n, a, a))
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            if isinstance(e, Jet2):
                val[i, j] = e.value
                grad[:, i, j] = e.grad
                hess[:, :, i, j] = e.hess
            else:
                val[i, j] = float(e)
    return val, grad, hess
