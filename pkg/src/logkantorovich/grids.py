"""Sampling grids on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class Grid:
    points: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise DomainError("grid must be nonempty")
        if np.any(pts < 0.0) or np.any(pts > 1.0) or np.any(np.isnan(pts)):
            raise DomainError("grid points must lie in [0, 1]")
        if np.any(np.diff(pts) <= 0.0):
            raise DomainError("grid points must be strictly increasing")
        if self.kind not in ("uniform", "chebyshev", "custom"):
            raise DomainError(f"unknown grid kind {self.kind!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, m: int = 257, a: float = 0.0, b: float = 1.0) -> "Grid":
        pts = np.linspace(a, b, m)
        return cls(pts, "uniform" if (a, b) == (0.0, 1.0) else "custom")

    @classmethod
    def chebyshev(cls, m: int = 257) -> "Grid":
        """Chebyshev-Lobatto points, endpoints included."""
        j = np.arange(m)
        pts = 0.5 * (1.0 - np.cos(np.pi * j / (m - 1)))
        pts[0], pts[-1] = 0.0, 1.0
        return cls(pts, "chebyshev")

    @property
    def spacing(self) -> float:
        """Largest gap between neighbouring points."""
        return float(np.max(np.diff(self.points))) if self.points.size > 1 else float("inf")

    def __len__(self):
        return self.points.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)


def as_points(grid) -> np.ndarray:
    if isinstance(grid, Grid):
        return grid.points
    pts = np.atleast_1d(np.asarray(grid, dtype=float))
    if pts.ndim != 1:
        raise DomainError("grid must be one-dimensional")
    return pts
