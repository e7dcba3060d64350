"""Forward-mode dual numbers with a gradient slot per coordinate.

A ``Jet`` carries a value and a tuple of partial derivatives.  Entries may
themselves be ``Jet`` objects, which gives higher derivatives by nesting:
an order-2 jet is a jet whose value and partials are order-1 jets.  Plain
floats are accepted anywhere and behave as constants at every level.

The module-level functions (``sin``, ``exp``, ...) dispatch on float vs Jet,
so the same evaluation code runs at order 0, 1, 2, ...
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("value", "grad")

    def __init__(self, value, grad):
        self.value = value
        self.grad = tuple(grad)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.value + other.value, [a + b for a, b in zip(self.grad, other.grad)])
        return Jet(self.value + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.value - other.value, [a - b for a, b in zip(self.grad, other.grad)])
        return Jet(self.value - other, self.grad)

    def __rsub__(self, other):
        return Jet(other - self.value, [-g for g in self.grad])

    def __neg__(self):
        return Jet(-self.value, [-g for g in self.grad])

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Jet):
            u, v = self.value, other.value
            return Jet(u * v, [a * v + u * b for a, b in zip(self.grad, other.grad)])
        return Jet(self.value * other, [g * other for g in self.grad])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            u, v = self.value, other.value
            q = u / v
            return Jet(q, [(a - q * b) / v for a, b in zip(self.grad, other.grad)])
        return Jet(self.value / other, [g / other for g in self.grad])

    def __rtruediv__(self, other):
        v = self.value
        q = other / v
        return Jet(q, [-q * g / v for g in self.grad])

    def __pow__(self, c):
        if isinstance(c, Jet):
            return exp(c * log(self))
        return power(self, c)

    def __rpow__(self, base):
        return exp(self * math.log(base))

    # -- inspection ---------------------------------------------------------

    @property
    def gradient(self) -> np.ndarray:
        """Partials as floats (the innermost value of each entry)."""
        return np.array([scalar(g) for g in self.grad], dtype=float)

    def flatten(self) -> list[float]:
        out = [scalar(self.value)] if not isinstance(self.value, Jet) else self.value.flatten()
        for g in self.grad:
            out.extend(g.flatten() if isinstance(g, Jet) else [float(g)])
        return out

    def __repr__(self):
        return f"Jet({self.value!r}, {list(self.grad)!r})"


def scalar(x) -> float:
    """Innermost real value of a possibly nested jet."""
    while isinstance(x, Jet):
        x = x.value
    return float(x)


def lower(x):
    """Drop one derivative order (the value slot)."""
    return x.value if isinstance(x, Jet) else x


def partial(x, i: int):
    """The i-th partial derivative, one order lower."""
    return x.grad[i] if isinstance(x, Jet) else 0.0


def order_of(x) -> int:
    k = 0
    while isinstance(x, Jet):
        x = x.value
        k += 1
    return k


def all_finite(x) -> bool:
    if isinstance(x, Jet):
        return all(math.isfinite(v) for v in x.flatten())
    return math.isfinite(x)


def variables(point, order: int) -> list:
    """Seed coordinate variables as nested jets of the given order.

    Order 0 returns plain floats.  The i-th variable at order k has value
    equal to the i-th variable at order k-1 and constant unit partial in
    slot i.
    """
    point = [float(v) for v in point]
    d = len(point)
    seeds = point
    for _ in range(order):
        seeds = [Jet(s, [1.0 if j == i else 0.0 for j in range(d)]) for i, s in enumerate(seeds)]
    return seeds


def as_jet(x, d: int) -> Jet:
    """Promote a float result to a first-order jet with zero gradient."""
    if isinstance(x, Jet):
        return x
    return Jet(float(x), [0.0] * d)


# -- elementary functions ---------------------------------------------------


def _chain(x: Jet, fx, dfx) -> Jet:
    return Jet(fx, [dfx * g for g in x.grad])


def sin(x):
    if isinstance(x, Jet):
        return _chain(x, sin(x.value), cos(x.value))
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet):
        return _chain(x, cos(x.value), -sin(x.value))
    return math.cos(x)


def tan(x):
    if isinstance(x, Jet):
        t = tan(x.value)
        return _chain(x, t, 1.0 + t * t)
    return math.tan(x)


def exp(x):
    if isinstance(x, Jet):
        e = exp(x.value)
        return _chain(x, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet):
        return _chain(x, log(x.value), 1.0 / x.value)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Jet):
        s = sqrt(x.value)
        return _chain(x, s, 0.5 / s)
    return math.sqrt(x)


def power(x, c: float):
    """x**c for a constant real exponent."""
    if c == 0:
        return 1.0
    if isinstance(x, Jet):
        if c == 1:
            return x
        return _chain(x, power(x.value, c), c * power(x.value, c - 1))
    if float(c).is_integer():
        return x ** int(c)
    return x**c


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
}
