"""Pointwise differential calculus on a single chart.

Fields are closed-form coefficient expressions.  Every field exposes
``jet(x, order)``: the field's value(s) at ``x`` as nested jets of the given
order (order 0 gives floats).  Derived fields elsewhere in the package
implement the same method, so brackets of brackets need no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DomainError
from . import jet as J
from .expr import Compiled, Expr, to_text


@dataclass(frozen=True)
class Point:
    coords: np.ndarray
    chart: str = ""

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise ValueError(f"non-finite point {c.tolist()}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __len__(self):
        return len(self.coords)


def as_coords(p) -> np.ndarray:
    return np.asarray(p.coords if isinstance(p, Point) else p, dtype=float).reshape(-1)


def _finite_or_raise(v, what, x):
    if not J.all_finite(v):
        raise DomainError(what, x, "non-finite value")
    return v


class ScalarField:
    """A scalar function given by one expression over the chart coordinates."""

    def __init__(self, source: str | Expr, coords: Sequence[str], name: str | None = None):
        self._c = Compiled(source, coords)
        self.coords = self._c.coords
        self.name = name or self._c.text

    @property
    def text(self) -> str:
        return self._c.text

    @property
    def expr(self) -> Expr:
        return self._c.expr

    def jet(self, x, order: int = 1):
        x = as_coords(x)
        xs = J.variables(x, order)
        try:
            v = self._c(xs)
        except DomainError as e:
            raise DomainError(e.what, x, e.reason) from None
        return _finite_or_raise(v, self.text, x)

    def __call__(self, x) -> float:
        return float(self.jet(x, 0))

    def __repr__(self):
        return f"ScalarField({self.name!r}: {self.text!r})"


class _Coefficients:
    def __init__(self, sources: Sequence[str | Expr], coords: Sequence[str]):
        coords = tuple(coords)
        if len(sources) != len(coords):
            raise ValueError(
                f"{type(self).__name__} needs {len(coords)} coefficients, got {len(sources)}"
            )
        self._cs = tuple(Compiled(s, coords) for s in sources)
        self.coords = coords

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def texts(self) -> list[str]:
        return [c.text for c in self._cs]

    def jet(self, x, order: int = 1) -> list:
        x = as_coords(x)
        xs = J.variables(x, order)
        out = []
        for c in self._cs:
            try:
                v = c(xs)
            except DomainError as e:
                raise DomainError(e.what, x, e.reason) from None
            out.append(_finite_or_raise(v, c.text, x))
        return out

    def __call__(self, x) -> np.ndarray:
        return np.array([float(v) for v in self.jet(x, 0)])

    def __repr__(self):
        return f"{type(self).__name__}({self.texts!r})"


class VectorFieldDef(_Coefficients):
    """Vector field X = sum X^i d/dx^i with expression components."""


class OneFormDef(_Coefficients):
    """1-form eta = sum eta_i dx^i with expression coefficients."""


@dataclass(frozen=True)
class TwoFormMatrix:
    """Coefficients of a 2-form at a point: omega(X, Y) = X^T A Y."""

    A: np.ndarray = field(repr=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        assert np.array_equal(A, -A.T), "two-form matrix must be antisymmetric"
        object.__setattr__(self, "A", A)

    def __call__(self, u, v) -> float:
        return antisym_pair(self.A, u, v)


def eval_jet(e, p, coords: Sequence[str] | None = None) -> J.Jet:
    """Value and gradient of a scalar expression at ``p`` (first order)."""
    f = e if isinstance(e, ScalarField) else ScalarField(e, coords)
    x = as_coords(p)
    return J.as_jet(f.jet(x, 1), len(x))


def d_matrix(coeff_jets: Sequence) -> list[list]:
    """A_ij = d_i eta_j - d_j eta_i from coefficient jets (result one order lower).

    Exactly antisymmetric for any number type: A_ji is computed as the
    negation of the same difference.
    """
    d = len(coeff_jets)
    A = [[0.0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            v = J.partial(coeff_jets[j], i) - J.partial(coeff_jets[i], j)
            A[i][j] = v
            A[j][i] = 0.0 - v
    return A


def d_oneform(eta: OneFormDef, p) -> TwoFormMatrix:
    return TwoFormMatrix(np.array(d_matrix(eta.jet(p, 1)), dtype=float))


def antisym_pair(A, u, v):
    """u^T A v for antisymmetric A, summed over i<j so swapping u, v negates exactly."""
    d = len(u)
    total = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            total = total + A[i][j] * (u[i] * v[j] - u[j] * v[i])
    return total


def bracket_components(Xj: Sequence, Yj: Sequence) -> list:
    """[X,Y]^i = X^j d_j Y^i - Y^j d_j X^i from jets of X and Y (result one order lower)."""
    d = len(Xj)
    out = []
    for i in range(d):
        a = 0.0
        b = 0.0
        for j in range(d):
            a = a + J.lower(Xj[j]) * J.partial(Yj[i], j)
            b = b + J.lower(Yj[j]) * J.partial(Xj[i], j)
        out.append(a - b)
    return out


def lie_bracket(X, Y, p) -> np.ndarray:
    """[X, Y] at ``p`` for any fields exposing ``jet(x, order)``."""
    x = as_coords(p)
    comps = bracket_components(X.jet(x, 1), Y.jet(x, 1))
    return np.array([J.scalar(c) for c in comps], dtype=float)


class BracketVectorField:
    """The vector field [X, Y], itself differentiable to any order."""

    def __init__(self, X, Y):
        self.X, self.Y = X, Y

    def jet(self, x, order: int = 1) -> list:
        return bracket_components(self.X.jet(x, order + 1), self.Y.jet(x, order + 1))

    def __call__(self, x) -> np.ndarray:
        return lie_bracket(self.X, self.Y, x)


def to_texts(exprs) -> list[str]:
    return [to_text(e) for e in exprs]
