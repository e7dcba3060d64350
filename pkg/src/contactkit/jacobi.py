"""Jacobi bracket, the bivector Lambda, and pointwise identity checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import contact as C
from .config import BracketConfig
from .geomcore import jet as J
from .geomcore.calculus import antisym_pair, as_coords, lie_bracket
from .report import CheckReport, Condition, Worst


@dataclass(frozen=True)
class BracketValue:
    value: float  # via d(alpha)(X_f, X_g)
    via_lambda: float  # via Lambda(df, dg)

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.via_lambda)


class _PointData:
    """Values, gradients and derived vectors of f at one point."""

    def __init__(self, f, contact, x, a, A, Z, tol):
        j = J.as_jet(f.jet(x, 1), len(x))
        self.value = float(j.value)
        self.grad = j.gradient
        self.LZ = float(self.grad @ Z)
        self.sharp = C.sharp(self.grad - self.LZ * a, contact, x, tol)
        self.X = self.value * Z + self.sharp


def bivector(df, dg, alpha, p, tol: float = 1e-9) -> float:
    """Lambda(df, dg) = d(alpha)(sharp(df_hat), sharp(dg_hat))."""
    x = as_coords(p)
    contact = C._as_contact(alpha)
    _, A = contact.frame(x)
    vf = C.sharp(C.semibasic_part(df, contact, x, tol), contact, x, tol)
    vg = C.sharp(C.semibasic_part(dg, contact, x, tol), contact, x, tol)
    return float(antisym_pair(A, vf, vg))


def jacobi_bracket_both(f, g, alpha, p, tol: float = 1e-9) -> BracketValue:
    x = as_coords(p)
    contact = C._as_contact(alpha)
    a, A = contact.frame(x)
    Z = C.reeb(contact, x, tol).Z
    F = _PointData(f, contact, x, a, A, Z, tol)
    G = _PointData(g, contact, x, a, A, Z, tol)
    tail = F.value * G.LZ - G.value * F.LZ
    return BracketValue(
        float(antisym_pair(A, F.X, G.X) + tail),
        float(antisym_pair(A, F.sharp, G.sharp) + tail),
    )


def jacobi_bracket(f, g, alpha, p, tol: float = 1e-9) -> float:
    """[f, g] = d(alpha)(X_f, X_g) + f Z(g) - g Z(f)."""
    return jacobi_bracket_both(f, g, alpha, p, tol).value


class BracketField:
    """The scalar field [f, g], differentiable to any order through nested jets."""

    def __init__(self, f, g, alpha):
        self.f, self.g = f, g
        self.contact = C._as_contact(alpha)
        self.name = f"[{getattr(f, 'name', f)},{getattr(g, 'name', g)}]"

    def jet(self, x, order: int = 1):
        x = as_coords(x)
        d = len(x)
        a, A = self.contact.jet_frame(x, order)
        fj = self.f.jet(x, order + 1)
        gj = self.g.jet(x, order + 1)
        df = [J.partial(fj, i) for i in range(d)]
        dg = [J.partial(gj, i) for i in range(d)]
        f0, g0 = J.lower(fj), J.lower(gj)
        Xf, Xg, Z = C.solve_jets(
            C._bordered_square(a, A), [df + [f0], dg + [g0], [0.0] * d + [1.0]]
        )
        Xf, Xg, Z = Xf[:d], Xg[:d], Z[:d]
        LZf = sum((df[i] * Z[i] for i in range(1, d)), df[0] * Z[0])
        LZg = sum((dg[i] * Z[i] for i in range(1, d)), dg[0] * Z[0])
        return antisym_pair(A, Xf, Xg) + (f0 * LZg - g0 * LZf)

    def __call__(self, x) -> float:
        return J.scalar(self.jet(x, 0))


def jacobi_identity_residual(f, g, h, alpha, p) -> float:
    """|[f,[g,h]] + [g,[h,f]] + [h,[f,g]]| at p."""
    total = (
        jacobi_bracket(f, BracketField(g, h, alpha), alpha, p)
        + jacobi_bracket(g, BracketField(h, f, alpha), alpha, p)
        + jacobi_bracket(h, BracketField(f, g, alpha), alpha, p)
    )
    return abs(total)


def check_isomorphism(f, g, alpha, cfg: BracketConfig, agreement_tol: float = 1e-9) -> CheckReport:
    """Phi([X_f, X_g]) against [f, g] at every sample point."""
    contact = C._as_contact(alpha)
    Xf, Xg = C.HamiltonianField(f, contact), C.HamiltonianField(g, contact)
    iso, agree = Worst(), Worst()
    for x in cfg.sample_points:
        phi = float(contact.coefficients(x) @ lie_bracket(Xf, Xg, x))
        b = jacobi_bracket_both(f, g, contact, x)
        iso.update(abs(phi - b.value), x)
        agree.update(b.discrepancy, x)
    rep = CheckReport("isomorphism")
    rep.add(iso.condition("isomorphism", cfg.tolerance))
    rep.add(agree.condition("bracket_formulas_agree", agreement_tol))
    return rep


def check_derivation(f, g, alpha, cfg: BracketConfig) -> CheckReport:
    """X_f(g) against [f, g] + g Z(f)."""
    contact = C._as_contact(alpha)
    Xf = C.HamiltonianField(f, contact)
    w = Worst()
    for x in cfg.sample_points:
        x = np.asarray(x)
        gj = J.as_jet(g.jet(x, 1), len(x))
        fj = J.as_jet(f.jet(x, 1), len(x))
        Z = C.reeb(contact, x).Z
        lhs = float(gj.gradient @ Xf(x))
        rhs = jacobi_bracket(f, g, contact, x) + float(gj.value) * float(fj.gradient @ Z)
        w.update(abs(lhs - rhs), x)
    rep = CheckReport("derivation")
    rep.add(w.condition("derivation", cfg.tolerance))
    return rep


def lemma1_equivalences(f, g, alpha, cfg: BracketConfig, identity_tol: float = 1e-9) -> CheckReport:
    """For semi-basic df, dg: [f,g] = d(alpha)(X_f,X_g) = Lambda(df,dg), and
    [f,g] = 0  <=>  X_f(g) = 0  <=>  X_g(f) = 0 on the sample set."""
    contact = C._as_contact(alpha)
    pts = cfg.sample_points
    rep = CheckReport("semibasic_pair")
    for name, h in (("f", f), ("g", g)):
        r, where = C.semibasic_residual(h, contact, pts)
        cond = Condition(
            f"semibasic_{name}",
            r <= cfg.tolerance,
            r,
            where.tolist(),
            {"tolerance": cfg.tolerance, "message": "" if r <= cfg.tolerance else "not semi-basic"},
            precondition=True,
        )
        rep.add(cond)
    if rep.precondition_failed:
        return rep

    Xf, Xg = C.HamiltonianField(f, contact), C.HamiltonianField(g, contact)
    ident = Worst()
    legs = {"bracket": Worst(), "Xf_g": Worst(), "Xg_f": Worst()}
    for x in pts:
        a, A = contact.frame(x)
        b = jacobi_bracket_both(f, g, contact, x)
        vf, vg = Xf(x), Xg(x)
        dalpha = float(antisym_pair(A, vf, vg))
        ident.update(max(abs(b.value - dalpha), abs(b.value - b.via_lambda)), x)
        dg = J.as_jet(g.jet(x, 1), len(x)).gradient
        df = J.as_jet(f.jet(x, 1), len(x)).gradient
        legs["bracket"].update(abs(b.value), x)
        legs["Xf_g"].update(abs(float(dg @ vf)), x)
        legs["Xg_f"].update(abs(float(df @ vg)), x)
    rep.add(ident.condition("identity", identity_tol))
    table = {k: {"zero": w.value <= cfg.tolerance, "max_abs": w.value} for k, w in legs.items()}
    flags = {v["zero"] for v in table.values()}
    rep.add(
        Condition(
            "equivalence",
            len(flags) == 1,
            max(w.value for w in legs.values()),
            None,
            {"tolerance": cfg.tolerance, "truth_table": table, "involution": table["bracket"]["zero"]},
        )
    )
    return rep
