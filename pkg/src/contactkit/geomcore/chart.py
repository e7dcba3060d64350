"""Coordinate charts and reproducible sample points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import qmc

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Chart:
    """Coordinate names, periodic flags and a coordinate box.

    The box bounds non-periodic coordinates (chart validity); periodic
    coordinates use their box as one period.  ``margin`` is the fraction of
    each non-periodic side trimmed away from boundaries and singular loci.
    """

    coords: tuple[str, ...]
    periodic: tuple[bool, ...]
    box: tuple[tuple[float, float], ...]
    margin: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "periodic", tuple(bool(p) for p in self.periodic))
        object.__setattr__(self, "box", tuple((float(lo), float(hi)) for lo, hi in self.box))
        d = len(self.coords)
        if len(self.periodic) != d or len(self.box) != d:
            raise ValueError("coords, periodic and box must have equal length")
        if len(set(self.coords)) != d:
            raise ValueError("duplicate coordinate names")
        for lo, hi in self.box:
            if not hi > lo:
                raise ValueError(f"empty box side [{lo}, {hi}]")
        if not 0.0 <= self.margin < 0.5:
            raise ValueError("margin must lie in [0, 0.5)")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def safe_box(self) -> np.ndarray:
        """Box with the margin trimmed from non-periodic sides, shape (d, 2)."""
        out = np.array(self.box, dtype=float)
        for k, per in enumerate(self.periodic):
            if not per:
                lo, hi = out[k]
                w = self.margin * (hi - lo)
                out[k] = (lo + w, hi - w)
        return out

    def flow_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower/upper bounds used to detect chart exit (inf for periodic)."""
        box = self.safe_box()
        lo, hi = box[:, 0].copy(), box[:, 1].copy()
        per = np.array(self.periodic)
        lo[per] = -np.inf
        hi[per] = np.inf
        return lo, hi

    def contains(self, x, safe: bool = True) -> bool:
        box = self.safe_box() if safe else np.array(self.box)
        x = np.asarray(x, dtype=float)
        for k, per in enumerate(self.periodic):
            if not per and not box[k, 0] <= x[k] <= box[k, 1]:
                return False
        return True

    def samples(self, n: int = 64, seed: int = 0) -> np.ndarray:
        return sample_box(self.safe_box(), n, seed)


def sample_box(box: Sequence[Sequence[float]], n: int = 64, seed: int = 0) -> np.ndarray:
    """``n`` scrambled-Sobol points in ``box`` (rows), deterministic in ``seed``."""
    box = np.asarray(box, dtype=float)
    d = box.shape[0]
    sampler = qmc.Sobol(d, scramble=True, seed=seed)
    m = max(0, math.ceil(math.log2(max(n, 1))))
    u = sampler.random_base2(m)[:n]
    return qmc.scale(u, box[:, 0], box[:, 1]) if d else u
