"""The second-order differential operator governing n * (L_n f - f)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..basis import LogWeight, ReparamCurve, king_moments, reparam
from ..errors import ParameterError
from ..funcexpr import FuncExpr, eval_jet, f_mu, require_c2
from ..grids import as_points
from ..operators import Family, OperatorSpec, apply_grid
from ..quadrature import QuadratureRule

__all__ = [
    "drift_coefficient",
    "diffusion_coefficient",
    "fmu_derivatives",
    "voronovskaja_rhs",
    "explicit_ode_lhs",
    "VoronovskajaRow",
    "VoronovskajaTable",
    "voronovskaja_check",
    "richardson_limit",
    "second_moment",
]


def drift_coefficient(w: LogWeight, x):
    """A(x) = 1/2 + (x - x^2) / (2 (1 + mu)) - x."""
    x = np.asarray(x, dtype=float)
    return 0.5 + (x - x * x) / (2.0 * (1.0 + w.mu)) - x


def diffusion_coefficient(x):
    """B(x) = (x - x^2) / 2."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (x - x * x)


def fmu_derivatives(f, w: LogWeight, x):
    """(f_mu', f_mu'') at x.

    ``f`` is a FuncExpr (differentiated by dual numbers after composing
    with 1/ln_mu) or any object exposing ``fmu_jet(x) -> (d1, d2)``.
    """
    if hasattr(f, "fmu_jet"):
        return f.fmu_jet(x)
    require_c2(f)
    j = eval_jet(f_mu(f, w), x)
    return j.d1, j.d2


def voronovskaja_rhs(f, w: LogWeight, x):
    """D(f)(x) = ln_mu(x) [A(x) f_mu'(x) + B(x) f_mu''(x)]."""
    d1, d2 = fmu_derivatives(f, w, x)
    x = np.asarray(x, dtype=float)
    out = np.log1p(w.mu + x) * (drift_coefficient(w, x) * d1 + diffusion_coefficient(x) * d2)
    return float(out) if out.ndim == 0 else out


def explicit_ode_lhs(f, w: LogWeight, x):
    """(1 + mu - x(1 + 2mu) - x^2) f_mu' + (1 + mu)(x - x^2) f_mu''.

    Equals 2 (1 + mu) (A f_mu' + B f_mu''), so it vanishes exactly where D(f) does.
    """
    d1, d2 = fmu_derivatives(f, w, x)
    x = np.asarray(x, dtype=float)
    mu = w.mu
    out = (1.0 + mu - x * (1.0 + 2.0 * mu) - x * x) * d1 + (1.0 + mu) * (x - x * x) * d2
    return float(out) if out.ndim == 0 else out


def richardson_limit(ns, scaled):
    """Least-squares fit of scaled(n) = L + c/n; returns (L, c) per column.

    ``scaled`` has shape (len(ns), m).
    """
    ns = np.asarray(ns, dtype=float)
    V = np.column_stack([np.ones_like(ns), 1.0 / ns])
    coef, *_ = np.linalg.lstsq(V, np.asarray(scaled, dtype=float), rcond=None)
    return coef[0], coef[1]


@dataclass(frozen=True)
class VoronovskajaRow:
    x: float
    scaled_errors: tuple
    rhs: float
    limit: float
    correction: float

    @property
    def abs_error(self) -> float:
        return abs(self.limit - self.rhs)

    @property
    def rel_error(self) -> float:
        return self.abs_error / abs(self.rhs) if self.rhs != 0.0 else float("inf")

    def agrees(self, rel: float = 0.02, abs_tol: float = 1e-3, threshold: float = 1e-3) -> bool:
        if abs(self.rhs) > threshold:
            return self.rel_error <= rel
        return self.abs_error <= abs_tol


@dataclass(frozen=True)
class VoronovskajaTable:
    ns: tuple
    rows: tuple

    def all_agree(self, **kw) -> bool:
        return all(r.agrees(**kw) for r in self.rows)


def voronovskaja_check(
    f,
    w: LogWeight,
    grid,
    n_schedule: Sequence[int],
    rule: Optional[QuadratureRule] = None,
) -> VoronovskajaTable:
    """Scaled errors n (L_n f - f)(x), their extrapolated limit and D(f)(x)."""
    ns = [int(n) for n in n_schedule]
    if len(ns) < 4:
        raise ParameterError("n_schedule needs at least 4 entries")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ParameterError("n_schedule must be strictly increasing")
    x = as_points(grid)
    rhs = np.atleast_1d(voronovskaja_rhs(f, w, x))
    fx = np.asarray(f(x), dtype=float)
    scaled = np.array([n * (apply_grid(OperatorSpec(Family.LOG_KANTOROVICH, n, w.mu), f, x, rule) - fx) for n in ns])
    lim, corr = richardson_limit(ns, scaled)
    rows = tuple(
        VoronovskajaRow(float(x[i]), tuple(float(v) for v in scaled[:, i]), float(rhs[i]), float(lim[i]), float(corr[i]))
        for i in range(x.size)
    )
    return VoronovskajaTable(tuple(ns), rows)


def second_moment(n: int, mu: float, x):
    """Q_n(x) = sum_k p_{n,k}(a_{n+1}(x)) (n+1) int_cell (t - x)^2 dt, from the King moments.

    n Q_n(x) tends to x - x^2.
    """
    x = np.asarray(x, dtype=float)
    a = reparam(ReparamCurve(n + 1, mu), x)
    _, m1, m2 = king_moments(n, a)
    n1 = n + 1.0
    # (n+1) * int over [k/(n+1), (k+1)/(n+1)] of (t - x)^2 = (k/(n+1) - x)^2 + (k/(n+1) - x)/(n+1) + 1/(3 (n+1)^2)
    out = (m2 - 2.0 * x * m1 + x * x) + (m1 - x) / n1 + 1.0 / (3.0 * n1 * n1)
    return float(out) if np.ndim(out) == 0 else out
