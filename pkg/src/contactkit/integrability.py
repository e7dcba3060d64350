"""Noncommutative integrability checks, action integrals and Reeb frequencies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import contact as C
from .config import CheckConfig, IntegratorConfig
from .dynamics import flow, rotation_numbers
from .errors import FlowError, SolveError
from .geomcore import jet as J
from .geomcore.calculus import ScalarField, antisym_pair, as_coords, lie_bracket
from .geomcore.chart import TWO_PI
from .jacobi import jacobi_bracket
from .report import CheckReport, Condition, Worst
from .systems import SystemDef, canonical_system


@dataclass
class IntegrableSystemSpec:
    """Integrals f_1..f_{2n-r} of X_f with f = f_1 or f = 1; the first r are central."""

    contact: C.ContactForm
    integrals: list
    r: int
    hamiltonian: object = C.ONE
    names: list[str] | None = None

    def __post_init__(self):
        self.contact = C._as_contact(self.contact)
        if not 0 <= self.r <= self.n:
            raise ValueError(f"r must lie in [0, n={self.n}]")
        if self.names is None:
            self.names = [getattr(f, "name", f"f{i + 1}") for i, f in enumerate(self.integrals)]

    @property
    def n(self) -> int:
        return self.contact.n

    @classmethod
    def from_system(cls, system: SystemDef) -> "IntegrableSystemSpec":
        if system.r is None:
            raise ValueError(f"{system.name} declares no integrability claim (r is unset)")
        return cls(system.contact, system.integral_fields, system.r, system.hamiltonian_field, list(system.integrals))


def _drift_condition(spec: IntegrableSystemSpec, cfg: CheckConfig) -> Condition:
    X = C.HamiltonianField(spec.hamiltonian, spec.contact)
    invariants = dict(zip(spec.names, spec.integrals))
    w = Worst()
    used, skipped = 0, []
    for x in cfg.sample_points:
        if used >= cfg.drift_starts:
            break
        try:
            traj = flow(X, x, cfg.integrator, invariants, cfg.flow_lower, cfg.flow_upper)
        except FlowError as e:
            skipped.append({"start": np.asarray(x).tolist(), "reason": type(e).__name__, "time": e.time})
            continue
        used += 1
        worst_name = max(traj.drift, key=traj.drift.get) if traj.drift else None
        w.update(traj.drift.get(worst_name, 0.0), x)
    cond = w.condition(
        "drift", cfg.tolerances.drift, starts=used, skipped=skipped, t_end=cfg.integrator.t_end
    )
    if used == 0:
        cond.passed = False
        cond.detail["message"] = "no trajectory stayed inside the chart"
    return cond


def verify_theorem5(spec: IntegrableSystemSpec, cfg: CheckConfig, check_drift: bool = True) -> CheckReport:
    """Check [1,f_i] = 0, [f_i,f_j] = 0 (j <= r), independence, and conservation.

    The involution block only pairs integrals with the first r (central)
    ones; brackets among non-central integrals are not constrained.
    """
    tol = cfg.tolerances
    rep = CheckReport("integrability", meta={"n": spec.n, "r": spec.r, "torus_dimension": spec.r + 1, "seed": cfg.seed})
    fs = spec.integrals
    p = 2 * spec.n - spec.r
    rep.add(
        Condition(
            "integral_count",
            len(fs) == p,
            float(abs(len(fs) - p)),
            None,
            {"expected": p, "given": len(fs)},
        )
    )
    if spec.hamiltonian is not C.ONE:
        first = bool(fs) and fs[0] is spec.hamiltonian
        rep.add(Condition("hamiltonian_first", first, 0.0 if first else 1.0, None, {}))

    semi, invol = Worst(), Worst()
    worst_ratio, worst_sv, worst_pt = math.inf, None, None
    d = spec.contact.dim
    for x in cfg.sample_points:
        Z = C.reeb(spec.contact, x, tol.linear).Z
        grads = np.array([J.as_jet(f.jet(x, 1), d).gradient for f in fs]).reshape(len(fs), d)
        semi.update(float(np.max(np.abs(grads @ Z), initial=0.0)), x)
        for i in range(len(fs)):
            for j in range(spec.r):
                if i != j:
                    invol.update(abs(jacobi_bracket(fs[i], fs[j], spec.contact, x, tol.linear)), x)
        sv = np.linalg.svd(grads, compute_uv=False) if len(fs) else np.zeros(1)
        ratio = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
        if ratio < worst_ratio:
            worst_ratio, worst_sv, worst_pt = ratio, sv, np.asarray(x).tolist()
    rep.add(semi.condition("semibasic", tol.semibasic))
    if spec.r == 0 or not invol.seen:
        rep.add(Condition("involution", True, 0.0, None, {"tolerance": tol.involution, "pairs": 0}))
    else:
        rep.add(invol.condition("involution", tol.involution))
    rep.add(
        Condition(
            "independence",
            worst_ratio >= tol.rank_rel,
            worst_ratio,
            worst_pt,
            {"tolerance": tol.rank_rel, "singular_values": worst_sv, "measure": "min singular value / max"},
        )
    )
    rep.singular_values = None if worst_sv is None else [float(s) for s in worst_sv]
    if check_drift:
        rep.add(_drift_condition(spec, cfg))
    return rep


# -- isotropy <=> integrability ---------------------------------------------------


class HorizontalPart:
    """X_hat = X - alpha(X) Z as a differentiable field."""

    def __init__(self, X, alpha):
        self.X = X
        self.contact = C._as_contact(alpha)

    def jet(self, x, order: int = 1) -> list:
        x = as_coords(x)
        d = len(x)
        a, A = self.contact.jet_frame(x, order)
        Z = C.solve_jets(C._bordered_square(a, A), [[0.0] * d + [1.0]])[0][:d]
        Xj = self.X.jet(x, order)
        ax = sum((a[i] * Xj[i] for i in range(1, d)), a[0] * Xj[0])
        return [Xj[i] - ax * Z[i] for i in range(d)]

    def __call__(self, x) -> np.ndarray:
        return np.array([J.scalar(c) for c in self.jet(x, 0)])


def isotropy_integrability_check(symmetry_fields: Sequence, alpha, cfg: CheckConfig) -> CheckReport:
    """For horizontal parts u, v: d(alpha)(u,v) = -alpha([u,v]); isotropic <=> involutive."""
    contact = C._as_contact(alpha)
    tol = cfg.tolerances
    H = [HorizontalPart(X, contact) for X in symmetry_fields]
    cartan, iso, inv = Worst(), Worst(), Worst()
    pairs = [(i, j) for i in range(len(H)) for j in range(i + 1, len(H))]
    for x in cfg.sample_points:
        a, A = contact.frame(x)
        for i, j in pairs:
            u, v = H[i](x), H[j](x)
            w = float(antisym_pair(A, u, v))
            ab = float(a @ lie_bracket(H[i], H[j], x))
            cartan.update(abs(w + ab), x)
            iso.update(abs(w), x)
            inv.update(abs(ab), x)
    rep = CheckReport("isotropy", meta={"fields": len(H), "pairs": len(pairs)})
    if not pairs:
        for name in ("cartan_identity", "equivalence", "isotropic"):
            rep.add(Condition(name, True, 0.0, None, {"message": "fewer than two fields"}))
        return rep
    isotropic = iso.value <= tol.involution
    involutive = inv.value <= tol.involution
    rep.add(cartan.condition("cartan_identity", tol.isotropy))
    rep.add(
        Condition(
            "equivalence",
            isotropic == involutive,
            abs(iso.value - inv.value),
            None,
            {"isotropic": isotropic, "involutive": involutive},
        )
    )
    rep.add(
        Condition(
            "isotropic",
            isotropic,
            iso.value,
            iso.point,
            {"tolerance": tol.involution, "message": "" if isotropic else "not isotropic", "involutive": involutive},
        )
    )
    return rep


# -- action integrals ------------------------------------------------------------


class TorusCycle:
    """Closed curve tau -> c(tau), tau in [0, 2 pi], given by d expressions in ``tau``."""

    def __init__(self, exprs: Sequence[str], periodic: Sequence[bool], label: str = "", param: str = "tau"):
        self.fields = [ScalarField(e, (param,)) for e in exprs]
        self.periodic = tuple(bool(p) for p in periodic)
        self.label = label
        gap = self(TWO_PI) - self(0.0)
        for k, per in enumerate(self.periodic):
            if per:
                gap[k] -= TWO_PI * round(gap[k] / TWO_PI)
        if np.max(np.abs(gap), initial=0.0) > 1e-12:
            raise ValueError(f"cycle {label!r} is not closed: c(2pi) - c(0) = {gap.tolist()}")

    @classmethod
    def coordinate(cls, chart, base, angle: str, wobble: Mapping[str, str] | None = None) -> "TorusCycle":
        """The cycle along ``angle`` through ``base``, optionally displaced by tau-expressions."""
        wobble = dict(wobble or {})
        exprs = []
        for name, v in zip(chart.coords, as_coords(base)):
            lit = repr(abs(float(v)))
            lit = f"-{lit}" if v < 0 else lit
            e = f"tau + {lit}" if name == angle else lit
            if name in wobble:
                e = f"{e} + ({wobble[name]})"
            exprs.append(e)
        return cls(exprs, chart.periodic, label=angle)

    def __call__(self, tau: float) -> np.ndarray:
        return np.array([f([tau]) for f in self.fields])

    def velocity(self, tau: float) -> tuple[np.ndarray, np.ndarray]:
        jets = [J.as_jet(f.jet([tau], 1), 1) for f in self.fields]
        return np.array([j.value for j in jets]), np.array([j.grad[0] for j in jets], dtype=float)


@dataclass(frozen=True)
class ActionValue:
    value: float
    error: float
    nodes: int

    def __float__(self):
        return self.value

    @property
    def resolved(self) -> bool:
        return self.error <= 1e-6


def action_integral(alpha, cycle: TorusCycle, nodes: int = 256) -> ActionValue:
    """(1/2 pi) * closed integral of alpha along the cycle, periodic trapezoid rule.

    The error bound is the difference from the same rule on nodes/2 points.
    """
    if nodes < 2 or nodes % 2:
        raise ValueError("nodes must be an even integer >= 2")
    contact = C._as_contact(alpha)
    taus = TWO_PI * np.arange(nodes) / nodes
    vals = np.empty(nodes)
    for k, tau in enumerate(taus):
        c, dc = cycle.velocity(tau)
        vals[k] = float(contact.coefficients(c) @ dc)
    full = float(np.mean(vals))
    half = float(np.mean(vals[::2]))
    return ActionValue(full, abs(full - half), nodes)


# -- Reeb frequencies from the canonical form --------------------------------------


def reeb_frequency_constraints(y_values, y0_gradient) -> np.ndarray:
    """Solve z0 y0 + sum z_i y_i = 1, z0 dy0/dy_k + z_k = 0 for z = (z0..zr).

    ``y_values`` is (y0, y1..yr); ``y0_gradient`` holds dy0/dy_k, k=1..r.
    """
    y = np.asarray(y_values, dtype=float).reshape(-1)
    g = np.asarray(y0_gradient, dtype=float).reshape(-1)
    r = len(g)
    if len(y) != r + 1:
        raise ValueError(f"need {r + 1} y values (y0..y{r}), got {len(y)}")
    M = np.zeros((r + 1, r + 1))
    M[0] = y
    M[1:, 0] = g
    M[1:, 1:] = np.eye(r)
    rhs = np.zeros(r + 1)
    rhs[0] = 1.0
    cond = float(np.linalg.cond(M))
    if not cond < 1e12:
        raise SolveError("Reeb frequency", y, math.inf, cond)
    z = np.linalg.solve(M, rhs)
    if z[0] == 0.0:
        raise SolveError("Reeb frequency (z0 = 0)", y, 0.0, cond)
    return z


def frequencies_from_y0(y0_expr: str, actions: Sequence[str], y) -> np.ndarray:
    """z at action values y = (y1..yr) for y0 given as an expression in ``actions``."""
    y0 = ScalarField(y0_expr, actions)
    j = J.as_jet(y0.jet(y, 1), len(actions))
    return reeb_frequency_constraints(np.concatenate([[j.value], np.asarray(y, float)]), j.gradient)


def build_canonical_model(r: int, s: int, y0_expr: str, g_exprs: Sequence[str], n_check: int = 64,
                          **box) -> SystemDef:
    """alpha_0 = y0 dth0 + y1 dth1 + ... + g_1 dx_1 + ..., checked to be contact on its box."""
    system = canonical_system(r, s, y0_expr, g_exprs, **box)
    for x in system.samples(n_check):
        C.contact_check(system.contact, x, tol=system.tolerances.contact)
    return system


# -- tori of a system ------------------------------------------------------------


def torus_point(system: SystemDef, values: Mapping[str, float]) -> np.ndarray:
    """Full chart point from fixed non-angle values; unspecified angles start at 0."""
    x = np.zeros(system.chart.dim)
    for k, (name, per) in enumerate(zip(system.coords, system.chart.periodic)):
        if name in values:
            x[k] = float(values[name])
        elif not per:
            raise KeyError(name)
    unknown = set(values) - set(system.coords)
    if unknown:
        raise KeyError(sorted(unknown)[0])
    return x


def _angles(system: SystemDef) -> list[str]:
    if system.action_angle:
        return list(system.action_angle["angles"])
    return [c for c, p in zip(system.coords, system.chart.periodic) if p]


def torus_actions(system: SystemDef, point, nodes: int = 256, angles=None) -> dict[str, ActionValue]:
    """Action integral of each angle-coordinate cycle through ``point``."""
    return {
        a: action_integral(system.contact, TorusCycle.coordinate(system.chart, point, a), nodes)
        for a in (angles or _angles(system))
    }


def predicted_frequencies(system: SystemDef, point, nodes: int = 256) -> np.ndarray | None:
    """z(y) from the declared y0 with y_k read off the action integrals."""
    aa = system.action_angle
    if not aa:
        return None
    acts = torus_actions(system, point, nodes, aa["angles"][1:])
    y = [acts[a].value for a in aa["angles"][1:]]
    return frequencies_from_y0(aa["y0"], aa["actions"], y)


def measured_rotation(system: SystemDef, point, t_end: float = 20.0, hamiltonian=None,
                      integrator: IntegratorConfig | None = None):
    X = system.vector_field(hamiltonian)
    cfg = (integrator or IntegratorConfig()).with_t_end(t_end)
    lo, hi = system.chart.flow_bounds()
    traj = flow(X, point, cfg, lower=lo, upper=hi)
    idx = [system.chart.index(a) for a in _angles(system)]
    return rotation_numbers(traj, idx, system.tolerances.rotation_fit)


def frequency_map_check(system: SystemDef, tori: Sequence[Mapping[str, float]], cfg: CheckConfig,
                        hamiltonian=None, angle_starts: int = 2) -> CheckReport:
    """Rotation numbers depend on the actions only.

    Each torus is flowed from ``angle_starts`` initial angles.  Tori sharing
    action values (but differing in x) must agree; tori with different
    predicted frequencies must differ; measurements must match z(y) when y0
    is declared.
    """
    tol = cfg.tolerances.rotation
    rng = np.random.default_rng(cfg.seed)
    angle_idx = [system.chart.index(a) for a in _angles(system)]
    runs = []
    for values in tori:
        base = torus_point(system, values)
        y = tuple(round(v.value, 9) for v in torus_actions(system, base).values())
        oms = []
        for k in range(angle_starts):
            x = base.copy()
            if k:
                x[angle_idx] = rng.uniform(0, TWO_PI, len(angle_idx))
            est = measured_rotation(system, x, cfg.integrator.t_end, hamiltonian, cfg.integrator)
            oms.append(est)
        pred = predicted_frequencies(system, base) if hamiltonian in (None, "1") else None
        runs.append({"torus": dict(values), "actions": y, "estimates": oms, "predicted": pred})

    rep = CheckReport("frequency_map", meta={"tori": len(runs), "angles": _angles(system)})
    fit, ang, xind, pred_w = Worst(), Worst(), Worst(), Worst()
    for run in runs:
        om = np.array([e.omega for e in run["estimates"]])
        for e in run["estimates"]:
            fit.update(e.residual, None)
        ang.update(float(np.max(np.abs(om - om[0]))), None)
        if run["predicted"] is not None:
            pred_w.update(float(np.max(np.abs(om - run["predicted"]))), None)
        run["omega"] = om.mean(axis=0)
    groups: dict = {}
    for run in runs:
        groups.setdefault(run["actions"], []).append(run["omega"])
    for oms in groups.values():
        xind.update(float(np.max(np.abs(np.array(oms) - oms[0]))), None)
    rep.add(fit.condition("linear_fit", cfg.tolerances.rotation_fit))
    rep.add(ang.condition("angle_independence", tol))
    rep.add(xind.condition("x_independence", tol, groups=len(groups)))
    if pred_w.seen:
        rep.add(pred_w.condition("matches_linear_system", tol))

    # tori whose predictions differ must be told apart by the measurements
    distinct_ok, compared = True, 0
    reps = [(r["predicted"], r["omega"]) for r in runs if r["predicted"] is not None]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if np.max(np.abs(reps[i][0] - reps[j][0])) > 10 * tol:
                compared += 1
                distinct_ok &= bool(np.max(np.abs(reps[i][1] - reps[j][1])) > tol)
    rep.add(Condition("y_dependence", distinct_ok, 0.0, None, {"distinct_pairs": compared}))
    rep.meta["omega"] = [r["omega"].tolist() for r in runs]
    rep.meta["actions"] = [list(r["actions"]) for r in runs]
    return rep
