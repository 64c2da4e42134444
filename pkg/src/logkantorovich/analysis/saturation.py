"""Saturation class: the weights factoring D and the explicit solutions of D(f) = 0."""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from ..basis import LogWeight
from ..errors import DomainError
from ..quadrature import QuadratureRule, integrate_panels

__all__ = ["saturation_weights", "SaturationSolution", "saturation_solution"]


def saturation_weights(w: LogWeight, x) -> Tuple:
    """(w0, w1, w2) with D(f) = (1/w2) ((1/w1) (f/w0)')'.

    w0 = ln_mu, w1 = exp(-x/(1+mu)) / (x - x^2), w2 = (2/ln_mu) exp(x/(1+mu)).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0) or np.isnan(arr).any():
        raise DomainError("saturation weights need 0 < x < 1")
    c = 1.0 / (1.0 + w.mu)
    lnm = np.log1p(w.mu + arr)
    w0 = lnm
    w1 = np.exp(-c * arr) / (arr - arr * arr)
    w2 = 2.0 / lnm * np.exp(c * arr)
    if arr.ndim == 0:
        return float(w0), float(w1), float(w2)
    return w0, w1, w2


def _w1(c, s):
    return np.exp(-c * s) / (s - s * s)


class SaturationSolution:
    """f(x) = ln_mu(x) (c1 + c2 * int_{x0}^{x} w1(s) ds) on a closed interval [a, b] in (0, 1).

    The integral is computed by adaptive Gauss-Legendre quadrature.  ``fmu_jet`` returns the exact derivatives
    f_mu' = c2 w1 and f_mu'' = c2 w1 (-1/x + 1/(1-x) - 1/(1+mu)).
    """

    def __init__(self, w: LogWeight, c1: float, c2: float, x0: float, a: float, b: float,
                 rule: Optional[QuadratureRule] = None):
        if not 0.0 < a <= x0 <= b < 1.0:
            raise DomainError("need 0 < a <= x0 <= b < 1")
        self.w = w
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.x0 = float(x0)
        self.a = float(a)
        self.b = float(b)
        self.rule = rule or QuadratureRule(tol=1e-14)
        self._c = 1.0 / (1.0 + w.mu)
        self.kinks: tuple = ()
        self.name = f"saturation(c1={self.c1:g}, c2={self.c2:g})"

    def _check(self, x):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < self.a) or np.any(arr > self.b) or np.isnan(arr).any():
            raise DomainError(f"saturation solution is defined on [{self.a}, {self.b}] only")
        return arr

    def w1_integral(self, x):
        """int_{x0}^{x} w1(s) ds, signed.

        The requested points are sorted together with x0, the pieces between
        neighbours are integrated and accumulated outward from x0.
        """
        arr = self._check(x)
        flat = arr.ravel()
        pts, inv = np.unique(np.concatenate([[self.x0], flat]), return_inverse=True)
        pieces = integrate_panels(self.rule, lambda s: _w1(self._c, s), pts[:-1], pts[1:])
        cum = np.concatenate([[0.0], np.cumsum(pieces)])
        cum -= cum[inv[0]]
        out = cum[inv[1:]].reshape(arr.shape)
        return float(out) if arr.ndim == 0 else out

    def fmu(self, x):
        return self.c1 + self.c2 * np.asarray(self.w1_integral(x))

    def __call__(self, x):
        arr = self._check(x)
        out = np.log1p(self.w.mu + arr) * self.fmu(arr)
        return float(out) if np.ndim(out) == 0 else out

    def fmu_jet(self, x):
        arr = self._check(x)
        w1 = _w1(self._c, arr)
        d1 = self.c2 * w1
        d2 = d1 * (-1.0 / arr + 1.0 / (1.0 - arr) - self._c)
        return d1, d2

    def derivatives(self, x):
        """(f, f', f'') by the product rule on ln_mu * f_mu."""
        arr = self._check(x)
        L = np.log1p(self.w.mu + arr)
        L1 = 1.0 / (1.0 + self.w.mu + arr)
        L2 = -L1 * L1
        g = self.fmu(arr)
        g1, g2 = self.fmu_jet(arr)
        return L * g, L1 * g + L * g1, L2 * g + 2.0 * L1 * g1 + L * g2

    def extended(self) -> "ExtendedSolution":
        return ExtendedSolution(self)


class ExtendedSolution:
    """A C^2 extension to [0, 1]: the solution on [a, b], its second-order
    Taylor polynomials at a and b outside.  Operators integrate over all of
    [0, 1], so they need values there; the extension only affects results
    near [a, b] through exponentially small basis tails.
    """

    def __init__(self, sol: SaturationSolution):
        self.sol = sol
        self.kinks = (sol.a, sol.b)
        self.name = sol.name + " extended"
        self._left = tuple(float(v) for v in sol.derivatives(sol.a))
        self._right = tuple(float(v) for v in sol.derivatives(sol.b))

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        s = self.sol
        inside = np.clip(arr, s.a, s.b)
        out = np.asarray(s(inside), dtype=float).copy()
        for edge, (v, d1, d2), mask in (
            (s.a, self._left, arr < s.a),
            (s.b, self._right, arr > s.b),
        ):
            if np.any(mask):
                h = arr[mask] - edge
                out[mask] = v + d1 * h + 0.5 * d2 * h * h
        return float(out) if arr.ndim == 0 else out


def saturation_solution(w: LogWeight, c1: float, c2: float, x0: float = 0.5,
                        interval: Tuple[float, float] = (0.01, 0.99),
                        rule: Optional[QuadratureRule] = None) -> SaturationSolution:
    """The general classical solution of D(f) = 0 through the w1 quadrature."""
    a, b = interval
    return SaturationSolution(w, c1, c2, x0, a, b, rule)
