"""One-sided Hardy-Littlewood maximal function on [0, 1]."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..errors import DomainError
from ..grids import Grid, as_points
from ..quadrature import QuadratureRule, integrate_panels

__all__ = ["maximal_function", "interval_averages"]

DYADIC_LEVELS = 30


def interval_averages(f, x: float, ts, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """(1/(t - x)) * integral from x to t of |f|, for every t != x in ``ts``.

    Each interval is integrated on its own (split at the kinks of f), so
    short intervals keep full relative accuracy.
    """
    rule = rule or QuadratureRule()
    ts = np.asarray(ts, dtype=float)
    kinks = np.array(sorted(set(rule.kink_points) | set(getattr(f, "kinks", ()))), dtype=float)
    a_list, b_list, owner = [], [], []
    for i, t in enumerate(ts):
        lo, hi = (x, t) if t > x else (t, x)
        inner = kinks[(kinks > lo) & (kinks < hi)]
        edges = np.concatenate([[lo], inner, [hi]])
        a_list.append(edges[:-1])
        b_list.append(edges[1:])
        owner.append(np.full(edges.size - 1, i))
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    own = np.concatenate(owner)
    g = lambda u: np.abs(f(u))
    sums = integrate_panels(rule, g, a, b, own, ts.size, context={"x": x})
    return sums / np.abs(ts - x)


def maximal_function(f, x: float, grid=None, rule: Optional[QuadratureRule] = None) -> float:
    """M(f; x): sup over t != x of the average of |f| between x and t.

    The supremum runs over the grid points (default 257 uniform) plus the
    dyadic points x +- 2^-j, j = 1..30, that fall in [0, 1].  It is a lower
    estimate of the true supremum.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError("x must lie in [0, 1]")
    pts = as_points(grid if grid is not None else Grid.uniform(257))
    steps = 2.0 ** -np.arange(1, DYADIC_LEVELS + 1)
    cand = np.concatenate([pts, x + steps, x - steps])
    cand = cand[(cand >= 0.0) & (cand <= 1.0) & (cand != x)]
    cand = np.unique(cand)
    return float(np.max(interval_averages(f, x, cand, rule)))
