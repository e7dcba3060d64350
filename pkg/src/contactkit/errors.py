"""Exception types shared across the toolkit."""

from __future__ import annotations

import numpy as np


class ContactKitError(Exception):
    """Base class for all toolkit errors."""


class ExprSyntaxError(ContactKitError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset
        self.text = text


class UnknownIdentifierError(ContactKitError):
    def __init__(self, name: str, offset: int | None = None):
        where = "" if offset is None else f" at byte offset {offset}"
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class DomainError(ContactKitError):
    """An expression (or derived quantity) is undefined or non-finite at a point."""

    def __init__(self, what: str, point=None, reason: str = "undefined"):
        self.what = what
        self.point = None if point is None else np.asarray(point, dtype=float)
        self.reason = reason
        loc = "" if self.point is None else f" at {self.point.tolist()}"
        super().__init__(f"{reason}: {what}{loc}")


class ContactConditionError(ContactKitError):
    """The form fails alpha ^ (d alpha)^n != 0 at a point."""

    def __init__(self, point, det: float):
        self.point = np.asarray(point, dtype=float)
        self.det = det
        super().__init__(f"contact condition fails at {self.point.tolist()} (det={det:.3e})")


class SolveError(ContactKitError):
    """A pointwise linear solve left a residual above tolerance."""

    def __init__(self, what: str, point, residual: float, cond: float):
        self.point = np.asarray(point, dtype=float)
        self.residual = residual
        self.cond = cond
        super().__init__(
            f"{what} solve residual {residual:.3e} at {self.point.tolist()} "
            f"(condition estimate {cond:.3e})"
        )


class FlowError(ContactKitError):
    """Integration stopped before reaching t_end."""

    def __init__(self, message: str, time: float, state, trajectory=None):
        self.time = time
        self.state = np.asarray(state, dtype=float)
        self.trajectory = trajectory
        super().__init__(f"{message} at t={time:.17g}, state={self.state.tolist()}")


class StepUnderflowError(FlowError):
    pass


class ChartExitError(FlowError):
    pass


class SpecError(ContactKitError):
    """Malformed system specification (JSON or builtin name)."""
