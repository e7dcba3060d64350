"""Flow integration, invariant drift, pullback checks and rotation numbers."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import contact as C
from .config import IntegratorConfig, Tolerances
from .errors import ChartExitError, DomainError, StepUnderflowError
from .geomcore.calculus import as_coords
from .report import CheckReport, Condition, Worst


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), d)
    drift: dict[str, float] = field(default_factory=dict)
    exit_time: float | None = None
    nfev: int = 0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def x0(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, fh=None) -> str | None:
        """Write ``t,x0..x{d-1}`` rows with 17 significant digits."""
        own = fh is None
        buf = io.StringIO() if own else fh
        d = self.states.shape[1]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x{i}" for i in range(d)])
        for t, row in zip(self.times, self.states):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in row])
        return buf.getvalue() if own else None


@dataclass(frozen=True)
class RotationEstimate:
    omega: np.ndarray
    residual: float
    angle_indices: tuple[int, ...] = ()
    fit_tol: float = 1e-3

    @property
    def linear(self) -> bool:
        """False flags 'not a linear flow in these coordinates'."""
        return self.residual <= self.fit_tol


def reversed_field(X) -> Callable:
    return lambda x: -np.asarray(X(x))


def _default_stride(X, x0, t_end: float) -> float:
    speed = float(np.max(np.abs(np.asarray(X(x0), dtype=float)), initial=0.0))
    stride = 0.1 if speed == 0 else min(0.1, 2 * math.pi / speed / 8)
    if t_end > 0:
        stride = min(stride, t_end / 16)
    return stride


def _sample_times(t_end: float, stride: float) -> np.ndarray:
    ts = np.arange(0.0, t_end, stride)
    if t_end - ts[-1] <= 1e-9 * stride:
        ts[-1] = t_end
    else:
        ts = np.append(ts, t_end)
    return ts


def _exit_events(lower, upper):
    events = []
    if lower is None:
        return events
    for k in range(len(lower)):
        for bound, sign in ((lower[k], 1.0), (upper[k], -1.0)):
            if np.isfinite(bound):
                def ev(t, y, k=k, b=bound, s=sign):
                    return s * (y[k] - b)

                ev.terminal = True
                ev.direction = -1
                events.append(ev)
    return events


def _invariant_drift(states, invariants: Mapping) -> dict[str, float]:
    out = {}
    for name, f in invariants.items():
        f0 = f(states[0])
        out[name] = float(max(abs(f(x) - f0) for x in states))
    return out


def _integrate(fun, y0, times, cfg: IntegratorConfig, events):
    return solve_ivp(
        lambda t, y: fun(y),
        (0.0, float(times[-1])),
        y0,
        method="RK45",
        t_eval=times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        events=events or None,
    )


def flow(
    X,
    x0,
    cfg: IntegratorConfig = IntegratorConfig(),
    invariants: Mapping | None = None,
    lower=None,
    upper=None,
) -> Trajectory:
    """Integrate dx/dt = X(x) from x0 over [0, cfg.t_end].

    Adaptive Dormand-Prince 5(4); states are reported on a uniform grid of
    spacing ``cfg.dense_output_stride`` (plus t_end) from the dense output.
    ``lower``/``upper`` bound the chart; leaving them raises
    :class:`ChartExitError` carrying the partial trajectory.
    """
    x0 = as_coords(x0)
    invariants = dict(invariants or {})

    def fun(y):
        v = np.asarray(X(y), dtype=float)
        if not np.all(np.isfinite(v)):
            raise DomainError("vector field", y, "non-finite value")
        return v

    if cfg.t_end == 0:
        traj = Trajectory(np.array([0.0]), x0[None, :])
        traj.drift = _invariant_drift(traj.states, invariants)
        return traj

    stride = cfg.dense_output_stride or _default_stride(fun, x0, cfg.t_end)
    times = _sample_times(cfg.t_end, stride)
    sol = _integrate(fun, x0, times, cfg, _exit_events(lower, upper))
    states = sol.y.T
    traj = Trajectory(sol.t, states, nfev=sol.nfev)
    if len(sol.t):
        traj.drift = _invariant_drift(states, invariants)
    if sol.status == 1:
        t_exit = float(next(te[0] for te in sol.t_events if len(te)))
        traj.exit_time = t_exit
        y_exit = next(ye[0] for ye in sol.y_events if len(ye))
        raise ChartExitError("left chart domain", t_exit, y_exit, traj)
    if sol.status == -1:
        last_t = float(sol.t[-1]) if len(sol.t) else 0.0
        last = states[-1] if len(states) else x0
        raise StepUnderflowError(sol.message, last_t, last, traj)
    return traj


def monitor_invariants(traj: Trajectory, fields) -> list[tuple[str, float]]:
    """Max |f(x(t)) - f(x0)| per field, largest first."""
    if not isinstance(fields, Mapping):
        fields = {getattr(f, "name", str(i)): f for i, f in enumerate(fields)}
    drift = _invariant_drift(traj.states, fields)
    return sorted(drift.items(), key=lambda kv: kv[1], reverse=True)


def pullback_check(
    alpha,
    X,
    traj: Trajectory,
    cfg: IntegratorConfig = IntegratorConfig(),
    tolerances: Tolerances = Tolerances(),
    displacement: float = 1e-5,
) -> CheckReport:
    """Compare (phi_t)^* alpha with alpha along a trajectory.

    Basis vectors at x0 are transported by one-sided differences of nearby
    flows (x0 + h e_k), integrated jointly with the base point so every copy
    sees the same step sequence.  The deviation is
    max_{t,k} |alpha_{x(t)}(v_k(t)) - alpha_{x0}(e_k)|; its finite-difference
    bias is O(h) times the second derivative of the flow map.
    """
    contact = C._as_contact(alpha)
    x0 = traj.x0
    d = len(x0)
    h = displacement
    rep = CheckReport("pullback")

    f = getattr(X, "f", None)
    if f is not None and f is not C.ONE:
        idx = np.unique(np.linspace(0, len(traj.states) - 1, min(32, len(traj.states))).astype(int))
        r, where = C.semibasic_residual(f, contact, traj.states[idx])
        ok = r <= tolerances.semibasic
        rep.add(
            Condition(
                "precondition_semibasic",
                ok,
                r,
                where.tolist(),
                {"tolerance": tolerances.semibasic, "message": "" if ok else "df not semi-basic"},
                precondition=True,
            )
        )

    def stacked(y):
        return np.concatenate([np.asarray(X(y[k * d:(k + 1) * d]), dtype=float) for k in range(d + 1)])

    y0 = np.concatenate([x0] + [x0 + h * e for e in np.eye(d)])
    if len(traj.times) == 1:
        Y = y0[None, :]
    else:
        sol = _integrate(stacked, y0, traj.times, cfg, [])
        Y = sol.y.T
    a0 = contact.coefficients(x0)
    w = Worst()
    for t, row in zip(traj.times, Y):
        base = row[:d]
        a = contact.coefficients(base)
        V = (row[d:].reshape(d, d) - base) / h
        dev = np.max(np.abs(V @ a - a0))
        w.update(dev, base)
    rep.add(w.condition("pullback", tolerances.pullback, displacement=h, t_end=float(traj.times[-1])))
    return rep


def rotation_numbers(traj: Trajectory, angle_indices: Sequence[int], fit_tol: float = 1e-3) -> RotationEstimate:
    """Fit theta_k(t) = theta_k(0) + omega_k t to unwrapped angles."""
    idx = tuple(int(i) for i in angle_indices)
    t = traj.times
    tt = float(t @ t)
    omega, resid = [], 0.0
    for k in idx:
        th = np.unwrap(traj.states[:, k], discont=math.pi)
        y = th - th[0]
        w = float(t @ y) / tt if tt > 0 else 0.0
        omega.append(w)
        resid = max(resid, float(np.sqrt(np.mean((y - w * t) ** 2))))
    return RotationEstimate(np.array(omega), resid, idx, fit_tol)
