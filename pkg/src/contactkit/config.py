"""Run configuration: tolerances, integrator settings, sample sets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    linear: float = 1e-9  # pointwise solve residuals (Reeb, sharp)
    contact: float = 1e-9  # |det| of the bordered matrix
    semibasic: float = 1e-8  # |<df, Z>|, i.e. [1, f]
    involution: float = 1e-8  # |[f_i, f_j]|
    bracket_agreement: float = 1e-9  # the two bracket formulas
    isomorphism: float = 1e-6  # Phi([X_f, X_g]) vs [f, g]
    derivation: float = 1e-8
    rank_rel: float = 1e-6  # smallest / largest singular value
    drift: float = 1e-6
    isotropy: float = 1e-7
    pullback: float = 1e-6
    rotation: float = 1e-4
    rotation_fit: float = 1e-3
    action_error: float = 1e-6

    def updated(self, **kw) -> "Tolerances":
        unknown = set(kw) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in kw.items()})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = np.inf
    t_end: float = 10.0
    dense_output_stride: float | None = None  # None: chosen from a frequency pre-pass

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("integrator tolerances must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if self.dense_output_stride is not None and not self.dense_output_stride > 0:
            raise ValueError("dense_output_stride must be positive")

    def with_t_end(self, t_end: float) -> "IntegratorConfig":
        return replace(self, t_end=float(t_end))


@dataclass(frozen=True)
class BracketConfig:
    """Sample set and the single tolerance governing a bracket check."""

    tolerance: float
    sample_points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.sample_points, dtype=float))
        if pts.size == 0:
            raise ValueError("sample_points must be nonempty")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "sample_points", pts)


@dataclass(frozen=True)
class CheckConfig:
    """Everything a verification run needs besides the system itself."""

    sample_points: np.ndarray = field(repr=False)
    tolerances: Tolerances = Tolerances()
    integrator: IntegratorConfig = IntegratorConfig()
    flow_lower: np.ndarray | None = field(default=None, repr=False)
    flow_upper: np.ndarray | None = field(default=None, repr=False)
    drift_starts: int = 4
    seed: int = 0

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.sample_points, dtype=float))
        if pts.size == 0:
            raise ValueError("sample_points must be nonempty")
        object.__setattr__(self, "sample_points", pts)

    def bracket(self, tolerance: float | None = None) -> BracketConfig:
        return BracketConfig(tolerance or self.tolerances.involution, self.sample_points)
