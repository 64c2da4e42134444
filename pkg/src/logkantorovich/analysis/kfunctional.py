"""Upper bounds for Peetre K-functionals by minimizing over explicit candidates.

    K(f, t)_p  = inf over g in C^1     of ||f - g||_p + t (||g||_inf + ||g'||_inf)
    K~(f, t)_p = inf over g in W^{1,p} of ||f - g||_p + t (||g||_p + ||g'||_p)

Every candidate g is an explicitly defined function (zero, f itself, a cubic
spline through Gaussian-mollified samples of f, or a Legendre least-squares
polynomial), and both terms are computed for that exact g: sup norms from
the critical points of the piecewise polynomial, L^p norms by adaptive
quadrature.  The minimum over candidates is therefore an upper bound on the
infimum.  For a fixed (f, variant, p) each candidate contributes a pair
(distance, norm) that does not depend on t, so the table is built once and
K(f, t) is then the minimum of distance + t * norm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import legendre as L
from scipy.interpolate import CubicSpline
from scipy.ndimage import gaussian_filter1d
from scipy.optimize import minimize_scalar

from ..errors import LogKantorovichError, ParameterError
from ..funcexpr import Smoothness, eval_jet
from ..quadrature import QuadratureRule, integrate

__all__ = ["KVariant", "Candidate", "KResult", "k_functional", "candidate_table", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 40
MAX_POLY_DEGREE = 12
FINE_POINTS = 8193
SIGMA_MIN = 1e-3
SIGMA_MAX = 0.5


class KVariant(str, enum.Enum):
    PEETRE_C1 = "PeetreC1"
    SOBOLEV_W1P = "SobolevW1p"


@dataclass(frozen=True)
class Candidate:
    descriptor: str
    distance: float  # ||f - g||_p
    g_norm: float  # ||g||_{C^1} or ||g||_{W^{1,p}}

    def value(self, t: float) -> float:
        return self.distance + t * self.g_norm


@dataclass(frozen=True)
class KResult:
    upper_bound: float
    descriptor: str
    exhausted: bool
    t: float
    variant: KVariant
    p: float
    is_upper_bound: bool = True


def _lp(g, p, rule, kinks=()):
    r = rule.with_kinks(tuple(k for k in kinks if 0.0 < k < 1.0))
    if p == 2.0:
        h = lambda x: np.square(g(x))
    elif p == 1.0:
        h = lambda x: np.abs(g(x))
    else:
        h = lambda x: np.abs(g(x)) ** p
    return max(integrate(r, h, 0.0, 1.0), 0.0) ** (1.0 / p)


def _poly_sup(coef_deriv_chain):
    """Exact max |q| on [0,1] for a Legendre series in t = 2x - 1."""
    q, dq = coef_deriv_chain
    pts = [-1.0, 1.0]
    if dq.size > 1 or (dq.size == 1 and dq[0] != 0.0):
        roots = L.legroots(dq) if dq.size > 1 else np.array([])
        pts.extend(r.real for r in np.atleast_1d(roots) if abs(r.imag) < 1e-12 and -1.0 <= r.real <= 1.0)
    return float(np.max(np.abs(L.legval(np.array(pts), q))))


def _spline_sup(pp):
    """Exact max |pp| on the spline's breakpoints interval."""
    x = pp.x
    crit = pp.derivative().roots(extrapolate=False)
    pts = np.concatenate([x, crit[np.isfinite(crit)]])
    return float(np.max(np.abs(pp(pts))))


def _func_sup(fun, grid):
    """Sup of |fun| on [0,1]: grid maximum refined by local bounded maximization."""
    vals = np.abs(fun(grid))
    best = float(np.max(vals))
    h = grid[1] - grid[0]
    for i in np.argsort(vals)[-3:]:
        lo, hi = max(0.0, grid[i] - h), min(1.0, grid[i] + h)
        res = minimize_scalar(lambda s: -abs(float(fun(np.array([s]))[0])), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def _norm_of(variant, p, rule, g, dg, sup_g, sup_dg, kinks):
    if variant is KVariant.PEETRE_C1:
        return sup_g() + sup_dg()
    return _lp(g, p, rule, kinks) + _lp(dg, p, rule, kinks)


def _sigma_net(count):
    if count <= 0:
        return np.array([])
    if count == 1:
        return np.array([SIGMA_MIN])
    return np.geomspace(SIGMA_MIN, SIGMA_MAX, count)


def _knots_for(sigma):
    # power of two plus one, so the knots are a subset of the fine grid
    m = int(2 ** math.ceil(math.log2(max(4.0 / sigma, 32.0))))
    return min(m, FINE_POINTS - 1) + 1


@lru_cache(maxsize=256)
def _candidate_table(f, variant: KVariant, p: float, budget: int, rule: QuadratureRule) -> Tuple[tuple, bool]:
    fkinks = tuple(getattr(f, "kinks", ()))
    fine = np.linspace(0.0, 1.0, FINE_POINTS)
    fvals = np.asarray(f(fine), dtype=float)
    cands = []

    def dist(g, extra_kinks=()):
        return _lp(lambda x: f(x) - g(x), p, rule, fkinks + tuple(extra_kinks))

    # g = 0
    cands.append(Candidate("zero", _lp(f, p, rule, fkinks), 0.0))

    # g = f, when admissible
    cls = getattr(f, "smoothness", None)
    if hasattr(f, "ast") and cls is not None:
        d1 = lambda x: np.asarray(eval_jet(f, np.asarray(x, dtype=float)).d1, dtype=float)
        admissible = cls >= Smoothness.C1 if variant is KVariant.PEETRE_C1 else True
        if admissible:
            try:
                if variant is KVariant.PEETRE_C1:
                    gn = _func_sup(f, fine) + _func_sup(d1, fine)
                else:
                    gn = _lp(f, p, rule, fkinks) + _lp(d1, p, rule, fkinks)
                if math.isfinite(gn):
                    cands.append(Candidate("f itself", 0.0, gn))
            except LogKantorovichError:
                pass

    remaining = budget - len(cands)
    n_poly = min(MAX_POLY_DEGREE + 1, max(remaining // 3, 0))
    n_sigma = max(remaining - n_poly, 0)
    full = (MAX_POLY_DEGREE + 1) + 24
    exhausted = remaining < full

    # Legendre least squares in L^2 on a dense Gauss sample
    gx, gw = L.leggauss(200)
    xs = 0.5 * (gx + 1.0)
    fx = np.asarray(f(xs), dtype=float)
    for deg in range(n_poly):
        V = L.legvander(gx, deg) * np.sqrt(gw)[:, None]
        coef, *_ = np.linalg.lstsq(V, fx * np.sqrt(gw), rcond=None)
        dcoef = L.legder(coef) * 2.0  # d/dx = 2 d/dt
        g = lambda x, c=coef: L.legval(2.0 * np.asarray(x) - 1.0, c)
        dg = lambda x, c=dcoef: L.legval(2.0 * np.asarray(x) - 1.0, c) if c.size else np.zeros_like(np.asarray(x, float))
        sup_g = lambda c=coef: _poly_sup((c, L.legder(c)))
        sup_dg = lambda c=dcoef: _poly_sup((c, L.legder(c))) if c.size else 0.0
        gn = _norm_of(variant, p, rule, g, dg, sup_g, sup_dg, ())
        cands.append(Candidate(f"legendre degree {deg}", dist(g), gn))

    # cubic splines through mollified samples (even reflection at both ends)
    step = 1.0 / (FINE_POINTS - 1)
    for sigma in _sigma_net(n_sigma):
        smooth = gaussian_filter1d(fvals, sigma / step, mode="mirror", truncate=6.0)
        m = _knots_for(sigma)
        stride = (FINE_POINTS - 1) // (m - 1)
        knots = fine[::stride]
        sp = CubicSpline(knots, smooth[::stride], bc_type="not-a-knot")
        dsp = sp.derivative()
        gn = _norm_of(
            variant, p, rule, sp, dsp,
            lambda sp=sp: _spline_sup(sp), lambda dsp=dsp: _spline_sup(dsp), tuple(knots[1:-1]),
        )
        cands.append(Candidate(f"mollified sigma={sigma:.4g} spline knots={m}", dist(sp, knots[1:-1]), gn))
    return tuple(cands), exhausted


def candidate_table(f, variant="PeetreC1", p: float = 2.0, search_budget: int = DEFAULT_BUDGET,
                    rule: Optional[QuadratureRule] = None):
    variant = KVariant(variant)
    p = float(p)
    if not 1.0 <= p < math.inf:
        raise ParameterError("need 1 <= p < inf")
    if int(search_budget) < 1:
        raise ParameterError("search_budget must be >= 1")
    rule = rule or QuadratureRule(tol=1e-11, max_depth=40)
    return _candidate_table(f, variant, p, int(search_budget), rule)


def k_functional(f, t: float, variant="PeetreC1", p: float = 2.0, search_budget: int = DEFAULT_BUDGET,
                 rule: Optional[QuadratureRule] = None) -> KResult:
    """Upper bound of the K-functional at t, with the winning candidate.

    ``exhausted`` is True when the budget was too small to try the whole
    candidate family; the value is still a valid upper bound.
    """
    t = float(t)
    if not t > 0.0:
        raise ParameterError("t must be positive")
    cands, exhausted = candidate_table(f, variant, p, search_budget, rule)
    best = min(cands, key=lambda c: c.value(t))
    return KResult(best.value(t), best.descriptor, exhausted, t, KVariant(variant), float(p))
