"""Structured pass/fail records for verification runs."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return v


@dataclass
class Condition:
    condition: str
    passed: bool
    worst_residual: float
    worst_point: list | None = None
    detail: dict = field(default_factory=dict)
    precondition: bool = False  # failures mean "not applicable", not "false"

    def to_dict(self) -> dict:
        return _clean(
            {
                "condition": self.condition,
                "pass": bool(self.passed),
                "worst_residual": self.worst_residual,
                "worst_point": self.worst_point,
                "detail": self.detail,
            }
        )


class Worst:
    """Running max of a residual with the point where it occurred."""

    def __init__(self):
        self.value = 0.0
        self.point = None
        self.seen = False

    def update(self, residual: float, point) -> None:
        r = float(residual)
        if not self.seen or r > self.value or math.isnan(r):
            self.value = r
            self.point = None if point is None else np.asarray(point, dtype=float).tolist()
            self.seen = True

    def condition(self, name: str, tol: float, **detail) -> Condition:
        ok = self.seen and self.value <= tol
        return Condition(name, ok, self.value, self.point, {"tolerance": tol, **detail})


@dataclass
class CheckReport:
    name: str
    conditions: list[Condition] = field(default_factory=list)
    singular_values: list[float] | None = None
    meta: dict = field(default_factory=dict)

    def add(self, cond: Condition) -> Condition:
        self.conditions.append(cond)
        return cond

    def extend(self, other: "CheckReport", prefix: str | None = None) -> None:
        for c in other.conditions:
            name = f"{prefix}.{c.condition}" if prefix else c.condition
            self.conditions.append(
                Condition(name, c.passed, c.worst_residual, c.worst_point, c.detail, c.precondition)
            )
        if other.singular_values is not None and self.singular_values is None:
            self.singular_values = other.singular_values

    def __getitem__(self, name: str) -> Condition:
        for c in self.conditions:
            if c.condition == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.condition == name for c in self.conditions)

    @property
    def precondition_failed(self) -> bool:
        return any(c.precondition and not c.passed for c in self.conditions)

    @property
    def verdict(self) -> bool:
        return bool(self.conditions) and all(c.passed for c in self.conditions)

    @property
    def status(self) -> str:
        if self.precondition_failed:
            return "precondition_failed"
        return "pass" if self.verdict else "fail"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "verdict": self.verdict,
            "status": self.status,
            "conditions": [c.to_dict() for c in self.conditions],
        }
        if self.singular_values is not None:
            out["singular_values"] = self.singular_values
        if self.meta:
            out["meta"] = self.meta
        return _clean(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def summary(self) -> str:
        lines = [f"{self.name}: {self.status}"]
        for c in self.conditions:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.condition}: worst={c.worst_residual:.3e}")
        return "\n".join(lines)
