"""Sup-on-grid, L^p and weighted L^p norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ParameterError
from ..grids import Grid, as_points
from ..quadrature import QuadratureRule, integrate

__all__ = ["NormKind", "norm", "lp_integral"]

_KINDS = ("SupGrid", "Lp", "LpMu")


@dataclass(frozen=True)
class NormKind:
    kind: str = "SupGrid"
    p: float = 2.0
    mu: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown norm kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind != "SupGrid" and not float(self.p) >= 1.0:
            raise ParameterError("p must be >= 1")
        if self.kind == "LpMu" and not (self.mu is not None and float(self.mu) > 0.0):
            raise ParameterError("LpMu needs mu > 0")
        object.__setattr__(self, "p", float(self.p))

    @classmethod
    def sup(cls) -> "NormKind":
        return cls("SupGrid")

    @classmethod
    def lp(cls, p: float = 2.0) -> "NormKind":
        return cls("Lp", p)

    @classmethod
    def lp_mu(cls, p: float, mu: float) -> "NormKind":
        return cls("LpMu", p, float(mu))


def lp_integral(f, p: float, rule: Optional[QuadratureRule] = None, a: float = 0.0, b: float = 1.0) -> float:
    """Integral of |f|^p over [a, b], splitting panels at ``f.kinks`` if present."""
    rule = (rule or QuadratureRule()).with_kinks(getattr(f, "kinks", ()))
    if p == 2.0:
        g = lambda t: np.square(f(t))
    elif p == 1.0:
        g = lambda t: np.abs(f(t))
    else:
        g = lambda t: np.abs(f(t)) ** p
    return integrate(rule, g, a, b)


def norm(f, kind: NormKind, grid=None, rule: Optional[QuadratureRule] = None) -> float:
    """Norm of a function (callable) or of sampled values (SupGrid only).

    SupGrid is the maximum of |f| over the grid (default: 257 uniform points),
    so it is a lower estimate of the true sup norm.
    """
    if kind.kind == "SupGrid":
        if callable(f):
            pts = as_points(grid if grid is not None else Grid.uniform(257))
            vals = np.asarray(f(pts), dtype=float)
        else:
            vals = np.asarray(f, dtype=float)
        return float(np.max(np.abs(vals)))
    if not callable(f):
        raise ParameterError("L^p norms need a callable, not sampled values")
    h = f
    if kind.kind == "LpMu":
        mu = float(kind.mu)

        def h(t, _f=f):
            return _f(t) / np.log1p(mu + t)

        h.kinks = getattr(f, "kinks", ())
    integral = lp_integral(h, kind.p, rule)
    return float(math.pow(max(integral, 0.0), 1.0 / kind.p))
