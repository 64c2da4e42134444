"""Moduli of continuity and smoothness, estimated from below on grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError, ParameterError, ResolutionError
from ..grids import Grid, as_points
from ..quadrature import QuadratureRule, integrate

__all__ = [
    "OmegaEstimate",
    "modulus_omega",
    "omega_estimate",
    "forward_difference",
    "modulus_omega_r",
    "POINTS_PER_DELTA",
]

# the grid spacing must not exceed delta / POINTS_PER_DELTA
POINTS_PER_DELTA = 20
MAX_AUTO_POINTS = 2_000_001


def _sparse_tables(v):
    """Range-max and range-min tables: level j covers windows of length 2**j."""
    mx, mn = [v], [v]
    j = 1
    while (1 << j) <= v.size:
        h = 1 << (j - 1)
        mx.append(np.maximum(mx[-1][:-h], mx[-1][h:]))
        mn.append(np.minimum(mn[-1][:-h], mn[-1][h:]))
        j += 1
    return mx, mn


def _window_oscillation(pts, vals, delta):
    """max over i of (max - min) of vals on {j : pts[i] <= pts[j] <= pts[i] + delta}."""
    lo = np.arange(pts.size)
    hi = np.searchsorted(pts, pts + delta * (1.0 + 1e-12), side="right") - 1
    length = hi - lo + 1
    level = np.floor(np.log2(length)).astype(int)
    mx, mn = _sparse_tables(vals)
    best = 0.0
    for j in np.unique(level):
        sel = np.flatnonzero(level == j)
        a = lo[sel]
        b = hi[sel] - (1 << j) + 1
        top = np.maximum(mx[j][a], mx[j][b])
        bot = np.minimum(mn[j][a], mn[j][b])
        best = max(best, float(np.max(top - bot)))
    return best


def _auto_grid(delta):
    m = int(math.ceil(POINTS_PER_DELTA / delta)) + 1
    m = min(max(m, 1025), MAX_AUTO_POINTS)
    return np.linspace(0.0, 1.0, m)


def modulus_omega(f, delta: float, grid=None) -> float:
    """Lower estimate of sup{|f(t) - f(x)| : |t - x| <= delta} from grid pairs.

    ``f`` is a callable or an array of values on ``grid``.  Without a grid a
    uniform one with spacing at most delta/20 is built.  For callables the
    pairs (x, x + delta) with x on the grid are included as well.
    """
    delta = float(delta)
    if not delta > 0.0:
        raise ParameterError("delta must be positive")
    pts = _auto_grid(delta) if grid is None else as_points(grid)
    if pts.size > 1:
        h = float(np.max(np.diff(pts)))
        if h > delta / POINTS_PER_DELTA * (1.0 + 1e-9):
            raise ResolutionError(
                f"grid spacing {h:.3g} exceeds delta/{POINTS_PER_DELTA} = {delta / POINTS_PER_DELTA:.3g}"
            )
    vals = np.asarray(f(pts), dtype=float) if callable(f) else np.asarray(f, dtype=float)
    if vals.shape != pts.shape:
        raise DomainError("values and grid differ in length")
    best = _window_oscillation(pts, vals, delta)
    if callable(f):
        # pairs exactly delta apart, which the grid alone need not contain
        lo, hi = pts[0], pts[-1]
        right = pts[pts + delta <= hi]
        left = pts[pts - delta >= lo]
        if right.size:
            best = max(best, float(np.max(np.abs(f(right + delta) - vals[: right.size]))))
        if left.size:
            best = max(best, float(np.max(np.abs(vals[pts.size - left.size:] - f(left - delta)))))
    return best


@dataclass(frozen=True)
class OmegaEstimate:
    value: float
    coarse_value: float
    relative_change: float


def omega_estimate(f, delta: float, points: Optional[int] = None) -> OmegaEstimate:
    """Modulus on a uniform grid and on its 2x refinement.

    The refined value is reported; the relative change between the two
    grids is a convergence indicator for the lower estimate.
    """
    coarse = _auto_grid(delta) if points is None else np.linspace(0.0, 1.0, int(points))
    fine = np.linspace(0.0, 1.0, 2 * coarse.size - 1)
    w_coarse = modulus_omega(f, delta, coarse)
    w_fine = modulus_omega(f, delta, fine)
    rel = abs(w_fine - w_coarse) / w_fine if w_fine > 0.0 else 0.0
    return OmegaEstimate(w_fine, w_coarse, rel)


def forward_difference(f, r: int, h: float, x):
    """Delta_h^r f(x) = sum_k (-1)^(r-k) C(r,k) f(x + k h)."""
    if int(r) != r or r < 0:
        raise ParameterError("r must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for k in range(int(r) + 1):
        out = out + (-1) ** (int(r) - k) * math.comb(int(r), k) * np.asarray(f(x + k * h), dtype=float)
    return out


def _h_net(t, h_min, per_octave=4):
    count = max(1, int(math.ceil(per_octave * math.log2(t / h_min))) + 1)
    return t * 2.0 ** (-np.arange(count) / per_octave)


def modulus_omega_r(f, r: int, t: float, grid=None, p: float = 2.0, rule: Optional[QuadratureRule] = None) -> float:
    """sup over a geometric h-net in (0, t] of the L^p norm of Delta_h^r f on [0, 1 - r h].

    The net runs from t down to the grid spacing (default grid: 1025
    uniform points), four steps per halving.  ``p = inf`` uses the grid
    maximum instead of quadrature.
    """
    r = int(r)
    if r < 1:
        raise ParameterError("r must be >= 1")
    t = float(t)
    if t < 0.0 or r * t > 1.0:
        raise ParameterError("need 0 <= t and r*t <= 1")
    if t == 0.0:
        return 0.0
    pts = as_points(grid if grid is not None else Grid.uniform(1025))
    h_min = float(np.max(np.diff(pts))) if pts.size > 1 else t
    if h_min > t:
        raise ResolutionError(f"grid spacing {h_min:.3g} exceeds t = {t:.3g}")
    p = float(p)
    if not p >= 1.0:
        raise ParameterError("p must be >= 1")
    rule = rule or QuadratureRule()
    kinks = getattr(f, "kinks", ())
    best = 0.0
    for h in _h_net(t, h_min):
        right = 1.0 - r * h
        if right <= 0.0:
            continue
        if math.isinf(p):
            xs = pts[pts <= right]
            val = float(np.max(np.abs(forward_difference(f, r, h, xs)))) if xs.size else 0.0
        else:
            shifted = [k - j * h for k in kinks for j in range(r + 1) if 0.0 < k - j * h < right]
            sub = QuadratureRule(rule.order, rule.max_depth, rule.tol, tuple(shifted))
            g = lambda x, h=h: np.abs(forward_difference(f, r, h, x)) ** p
            val = max(integrate(sub, g, 0.0, right), 0.0) ** (1.0 / p)
        best = max(best, val)
    return best
