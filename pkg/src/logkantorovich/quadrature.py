"""Composite Gauss-Legendre quadrature with adaptive bisection.

Integrands are vectorized callables ``g(t: ndarray) -> ndarray``.  Many
panels are processed at once: every round evaluates the whole-panel rule
and the two half-panel rules for all live panels in a single call of ``g``,
accepts the panels whose two estimates agree to ``tol`` and bisects the
rest.  For smooth integrands on Kantorovich cells one round suffices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import DomainError, ParameterError, QuadratureError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "integrate",
    "integrate_panels",
    "cell_average",
    "cell_averages",
    "cumulative_integral",
]


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1], by Newton iteration on P_order.

    The arrays are cached per order and returned read-only.
    """
    if order < 1:
        raise ParameterError("order must be >= 1")
    m = order
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # final derivative at the converged nodes
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1].copy()
    w = w[::-1].copy()
    # enforce exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureRule:
    order: int = 16
    max_depth: int = 30
    tol: float = 1e-12
    kink_points: Tuple[float, ...] = ()

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ParameterError("order must be an integer >= 2")
        if not self.tol > 0.0:
            raise ParameterError("tol must be positive")
        if self.max_depth < 0:
            raise ParameterError("max_depth must be nonnegative")
        kinks = tuple(sorted({float(k) for k in self.kink_points}))
        if any(k < 0.0 or k > 1.0 for k in kinks):
            raise ParameterError("kink points must lie in [0, 1]")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "kink_points", kinks)

    def with_kinks(self, kinks: Sequence[float]) -> "QuadratureRule":
        if not kinks:
            return self
        return replace(self, kink_points=tuple(self.kink_points) + tuple(kinks))


def _eval(g, t):
    vals = np.asarray(g(t), dtype=float)
    if vals.shape != t.shape:
        vals = np.broadcast_to(vals, t.shape)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("non-finite integrand value", float("inf"))
    return vals


def integrate_panels(rule: QuadratureRule, g: Callable, a, b, owner=None, n_owner=None, context=None):
    """Integrate ``g`` over each panel [a_i, b_i] and sum the results per owner.

    Returns an array of length ``n_owner`` (default: one entry per panel).
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if owner is None:
        owner = np.arange(a.size)
        n_owner = a.size
    owner = np.asarray(owner).ravel()
    result = np.zeros(n_owner)
    x, w = gauss_legendre(rule.order)
    # whole panel nodes followed by left-half and right-half nodes
    nodes = np.concatenate([x, 0.5 * (x - 1.0), 0.5 * (x + 1.0)])
    depth = 0
    while a.size:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        t = mid[:, None] + half[:, None] * nodes[None, :]
        vals = _eval(g, t)
        q = rule.order
        whole = half * (vals[:, :q] @ w)
        halves = 0.5 * half * (vals[:, q:2 * q] @ w + vals[:, 2 * q:] @ w)
        err = np.abs(whole - halves)
        floor = 64.0 * np.finfo(float).eps * (half * (np.abs(vals[:, :q]) @ w))
        ok = err <= np.maximum(rule.tol, floor)
        if np.any(ok):
            np.add.at(result, owner[ok], halves[ok])
        bad = ~ok
        if not np.any(bad):
            break
        if depth >= rule.max_depth:
            ctx = dict(context or {})
            ctx["interval"] = f"[{a[bad][0]:.17g}, {b[bad][0]:.17g}]"
            raise QuadratureError(
                f"no convergence after {rule.max_depth} bisections", float(err[bad].max()), ctx
            )
        a_bad, b_bad, m_bad, o_bad = a[bad], b[bad], mid[bad], owner[bad]
        a = np.concatenate([a_bad, m_bad])
        b = np.concatenate([m_bad, b_bad])
        owner = np.concatenate([o_bad, o_bad])
        depth += 1
    return result


def _split_points(rule, a, b):
    inner = [k for k in rule.kink_points if a < k < b]
    return np.array([a, *inner, b], dtype=float)


def integrate(rule: QuadratureRule, g: Callable, a: float, b: float) -> float:
    """Integral of ``g`` over [a, b] with forced panel breaks at the rule's kinks."""
    a = float(a)
    b = float(b)
    if not a <= b:
        raise DomainError("integrate needs a <= b")
    if a == b:
        return 0.0
    pts = _split_points(rule, a, b)
    parts = integrate_panels(rule, g, pts[:-1], pts[1:], context={"a": a, "b": b})
    return float(math.fsum(parts))


def _cell_panels(rule, n):
    m = n + 1
    edges = np.arange(m + 1) / m
    kinks = np.array([k for k in rule.kink_points if 0.0 < k < 1.0])
    if kinks.size:
        kinks = kinks[~np.isin(kinks, edges)]
    pts = np.union1d(edges, kinks)
    owner = np.searchsorted(edges, pts[:-1], side="right") - 1
    return pts[:-1], pts[1:], np.clip(owner, 0, n)


def cell_averages(rule: QuadratureRule, g: Callable, n: int) -> np.ndarray:
    """(n+1) times the integral of ``g`` over each cell [k/(n+1), (k+1)/(n+1)], k = 0..n."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    a, b, owner = _cell_panels(rule, n)
    sums = integrate_panels(rule, g, a, b, owner, n + 1, context={"n": n})
    return (n + 1) * sums


def cell_average(rule: QuadratureRule, g: Callable, n: int, k: int) -> float:
    """(n+1) times the integral of ``g`` over the k-th Kantorovich cell."""
    if not 0 <= k <= n:
        raise DomainError("k must lie in [0, n]")
    m = n + 1
    a, b = k / m, (k + 1) / m
    pts = _split_points(rule, a, b)
    parts = integrate_panels(rule, g, pts[:-1], pts[1:], context={"n": n, "k": k})
    return m * float(math.fsum(parts))


def cumulative_integral(rule: QuadratureRule, g: Callable, points) -> np.ndarray:
    """Integrals of ``g`` from points[0] to every entry of the sorted ``points``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size == 0 or np.any(np.diff(pts) < 0):
        raise DomainError("points must be a nonempty sorted 1-d array")
    kinks = np.array([k for k in rule.kink_points if pts[0] < k < pts[-1]])
    allp = np.union1d(pts, kinks)
    owner = np.searchsorted(pts, allp[:-1], side="right") - 1
    sums = integrate_panels(rule, g, allp[:-1], allp[1:], owner, pts.size)
    out = np.zeros(pts.size)
    out[1:] = np.cumsum(sums[:-1])
    return out
