"""Contact forms, the Reeb field, musical maps and contact Hamiltonian fields.

Conventions at a point x with alpha = sum a_i dx^i:

* ``A`` is the matrix of d(alpha): A_ij = d_i a_j - d_j a_i, d(alpha)(u, v) = u^T A v.
* flat(v) = -i_v d(alpha) = A v, a semi-basic covector for horizontal v.
* sharp inverts flat on horizontal vectors: A v = eta_hat, <a, v> = 0.
* X_f = f Z + sharp(df_hat), so that alpha(X_f) = f.

Two numerical routes exist.  The pointwise float operations below solve
the stacked (d+1) x d systems by least squares and report residuals.  The
``jet`` methods of :class:`HamiltonianField` instead solve the bordered
square system [[A, a], [a^T, 0]] differentiated through nested jets; they
supply derivatives of X_f wherever brackets of derived fields are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContactConditionError, SolveError
from .geomcore import jet as J
from .geomcore.calculus import OneFormDef, antisym_pair, as_coords, d_matrix


class ContactForm:
    """A 1-form on a chart of odd dimension 2n+1."""

    def __init__(self, alpha: OneFormDef):
        d = alpha.dim
        if d % 2 != 1:
            raise ValueError(f"contact forms live on odd-dimensional charts, got d={d}")
        self.alpha = alpha
        self.n = (d - 1) // 2

    @classmethod
    def from_exprs(cls, exprs, coords) -> "ContactForm":
        return cls(OneFormDef(exprs, coords))

    @property
    def dim(self) -> int:
        return self.alpha.dim

    @property
    def coords(self) -> tuple[str, ...]:
        return self.alpha.coords

    def coefficients(self, x) -> np.ndarray:
        return self.alpha(x)

    def frame(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(a, A): coefficients of alpha and of d(alpha) at x."""
        jets = self.alpha.jet(x, 1)
        a = np.array([J.scalar(c) for c in jets])
        A = np.array(d_matrix(jets), dtype=float)
        return a, A

    def jet_frame(self, x, order: int):
        """(a, A) as nested jets of the given order."""
        jets = self.alpha.jet(x, order + 1)
        return [J.lower(c) for c in jets], d_matrix(jets)

    def __repr__(self):
        return f"ContactForm({self.alpha.texts!r})"


def _as_contact(alpha) -> ContactForm:
    return alpha if isinstance(alpha, ContactForm) else ContactForm(alpha)


def bordered(a, A):
    """[[0, a^T], [-a, A]]; its determinant is nonzero iff alpha ^ (d alpha)^n != 0."""
    d = len(a)
    M = np.zeros((d + 1, d + 1))
    M[0, 1:] = a
    M[1:, 0] = -np.asarray(a)
    M[1:, 1:] = A
    return M


def contact_check(alpha, p, tol: float | None = None) -> float:
    """Determinant of the bordered matrix at p.

    The matrix is antisymmetric of even size, so the determinant is the
    square of its Pfaffian, itself proportional to the coefficient of
    alpha ^ (d alpha)^n.  With ``tol`` set, |det| < tol raises.
    """
    x = as_coords(p)
    a, A = _as_contact(alpha).frame(x)
    det = float(np.linalg.det(bordered(a, A)))
    if tol is not None and abs(det) < tol:
        raise ContactConditionError(x, det)
    return det


@dataclass(frozen=True)
class ReebResult:
    Z: np.ndarray = field(repr=False)
    residual: float
    cond: float


def _stacked_solve(a, A, rhs_top, rhs_last):
    M = np.vstack([A, a[None, :]])
    rhs = np.append(rhs_top, rhs_last)
    sol, _, _, sv = np.linalg.lstsq(M, rhs, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    return sol, M, rhs, cond


def reeb(alpha, p, tol: float = 1e-9, max_cond: float = 1e12) -> ReebResult:
    """Solve A Z = 0, <a, Z> = 1 as a (d+1) x d least-squares problem.

    A small residual alone does not make Z unique: where the stacked matrix
    loses rank (condition above ``max_cond``) the point is not contact.
    """
    x = as_coords(p)
    a, A = _as_contact(alpha).frame(x)
    Z, _, _, cond = _stacked_solve(a, A, np.zeros(len(a)), 1.0)
    residual = float(max(np.max(np.abs(A @ Z)), abs(a @ Z - 1.0)))
    if not (residual <= tol and cond <= max_cond):
        raise SolveError("Reeb", x, residual, cond)
    return ReebResult(Z, residual, cond)


def decompose(X, alpha, p, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """X = alpha(X) Z + X_hat with X_hat horizontal."""
    x = as_coords(p)
    X = np.asarray(X, dtype=float)
    a = _as_contact(alpha).coefficients(x)
    Z = reeb(alpha, x, tol).Z
    v = float(a @ X)
    return v, X - v * Z


def semibasic_part(eta, alpha, p, tol: float = 1e-9) -> np.ndarray:
    """eta_hat = eta - <eta, Z> a."""
    x = as_coords(p)
    eta = np.asarray(eta, dtype=float)
    a = _as_contact(alpha).coefficients(x)
    Z = reeb(alpha, x, tol).Z
    return eta - float(eta @ Z) * a


def semibasic_residual(f, alpha, points, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """max |<df, Z>| over points, and where it occurs."""
    worst, where = -1.0, None
    for x in np.atleast_2d(points):
        df = J.as_jet(f.jet(x, 1), len(x)).gradient
        r = abs(float(df @ reeb(alpha, x, tol).Z))
        if r > worst:
            worst, where = r, x
    return worst, np.asarray(where)


def is_semibasic(f, alpha, points, tol_semibasic: float = 1e-8) -> bool:
    return semibasic_residual(f, alpha, points)[0] <= tol_semibasic


def flat(v, alpha, p) -> np.ndarray:
    """-i_v d(alpha) = A v."""
    _, A = _as_contact(alpha).frame(as_coords(p))
    return A @ np.asarray(v, dtype=float)


def sharp(eta_hat, alpha, p, tol: float = 1e-9) -> np.ndarray:
    """The horizontal v with flat(v) = eta_hat."""
    x = as_coords(p)
    eta_hat = np.asarray(eta_hat, dtype=float)
    a, A = _as_contact(alpha).frame(x)
    v, _, _, cond = _stacked_solve(a, A, eta_hat, 0.0)
    residual = float(max(np.max(np.abs(A @ v - eta_hat)), abs(a @ v)))
    if not residual <= tol * max(1.0, float(np.max(np.abs(eta_hat)))):
        raise SolveError("sharp", x, residual, cond)
    return v


class ConstantField:
    """f = c, as a field with the usual ``jet`` protocol."""

    def __init__(self, c: float = 1.0):
        self.c = float(c)
        self.name = "1" if self.c == 1.0 else repr(self.c)
        self.text = self.name

    def jet(self, x, order: int = 1):
        return self.c

    def __call__(self, x) -> float:
        return self.c


ONE = ConstantField(1.0)


def _grad_and_value(f, x):
    j = J.as_jet(f.jet(x, 1), len(x))
    return float(j.value), j.gradient


def solve_jets(M, cols):
    """Solve M X = B column by column where entries may be nested jets.

    Derivatives follow from differentiating M X = B:
    M0 dX = dB - dM X0, recursively one order at a time.
    """
    k = max([J.order_of(e) for row in M for e in row] + [J.order_of(e) for c in cols for e in c])
    if k == 0:
        Mf = np.array(M, dtype=float)
        B = np.array(cols, dtype=float).T
        return np.linalg.solve(Mf, B).T.tolist()
    nslots = next(
        len(e.grad) for e in [e for row in M for e in row] + [e for c in cols for e in c] if isinstance(e, J.Jet)
    )
    M0 = [[J.lower(e) for e in row] for row in M]
    X0 = solve_jets(M0, [[J.lower(e) for e in c] for c in cols])
    m = len(M)
    rhs = []
    for s in range(nslots):
        for c, x0 in zip(cols, X0):
            col = []
            for i in range(m):
                acc = J.partial(c[i], s)
                for j in range(m):
                    dm = J.partial(M[i][j], s)
                    if not (isinstance(dm, float) and dm == 0.0):
                        acc = acc - dm * x0[j]
                col.append(acc)
            rhs.append(col)
    dX = solve_jets(M0, rhs)
    ncol = len(cols)
    out = []
    for ci, x0 in enumerate(X0):
        out.append([J.Jet(x0[i], [dX[s * ncol + ci][i] for s in range(nslots)]) for i in range(m)])
    return out


def _bordered_square(a, A):
    d = len(a)
    return [list(A[i]) + [a[i]] for i in range(d)] + [list(a) + [0.0]]


class HamiltonianField:
    """X_f = f Z + sharp(df_hat) for a scalar field f (``ONE`` gives Z)."""

    def __init__(self, f, alpha, tol: float = 1e-9):
        self.f = f
        self.contact = _as_contact(alpha)
        self.tol = tol

    @property
    def name(self) -> str:
        return f"X[{getattr(self.f, 'name', self.f)}]"

    def __call__(self, x) -> np.ndarray:
        x = as_coords(x)
        fv, df = _grad_and_value(self.f, x)
        Z = reeb(self.contact, x, self.tol).Z
        if self.f is ONE:
            return Z
        return fv * Z + sharp(semibasic_part(df, self.contact, x, self.tol), self.contact, x, self.tol)

    def jet(self, x, order: int = 1) -> list:
        """Components via the bordered solve [[A, a], [a^T, 0]] [X; mu] = [df; f]."""
        x = as_coords(x)
        a, A = self.contact.jet_frame(x, order)
        fj = self.f.jet(x, order + 1)
        d = len(a)
        rhs = [J.partial(fj, i) for i in range(d)] + [J.lower(fj)]
        sol = solve_jets(_bordered_square(a, A), [rhs])[0]
        return sol[:d]


def hamiltonian_vf(f, alpha) -> HamiltonianField:
    return HamiltonianField(f, alpha)


def reeb_field(alpha) -> HamiltonianField:
    return HamiltonianField(ONE, alpha)


def lie_derivative_alpha(X, alpha, p) -> np.ndarray:
    """L_X alpha = i_X d(alpha) + d(alpha(X)) at p, for any field with ``jet``."""
    x = as_coords(p)
    contact = _as_contact(alpha)
    a1, A = contact.jet_frame(x, 1)
    X1 = X.jet(x, 1)
    d = len(x)
    ax = 0.0
    for ai, xi in zip(a1, X1):
        ax = ax + ai * xi
    iX = [sum(J.scalar(X1[i]) * J.scalar(A[i][j]) for i in range(d)) for j in range(d)]
    dax = J.as_jet(ax, d).gradient
    return np.array(iX) + dax


def dalpha_pair(alpha, p, u, v) -> float:
    _, A = _as_contact(alpha).frame(as_coords(p))
    return float(antisym_pair(A, np.asarray(u, float), np.asarray(v, float)))
