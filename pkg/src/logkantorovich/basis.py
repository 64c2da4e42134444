"""Scalar building blocks: the logarithmic weight, the reparameterization
curve feeding the Bernstein basis, the basis itself, its moments and the
constants that appear in the quantitative estimates.

Everything here is a pure function of immutable inputs and accepts numpy
arrays wherever a real argument is documented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "LogWeight",
    "ReparamCurve",
    "PaperConstants",
    "ln_mu",
    "reparam",
    "reparam_complement",
    "reparam_gap_limit",
    "bernstein_basis",
    "bernstein_matrix",
    "basis_integral",
    "king_moments",
    "king_moments_direct",
    "gamma_n",
    "paper_constants",
    "FLUSH_EXPONENT",
]

# exp(-745) is the smallest positive double (subnormal); anything below flushes to 0.
FLUSH_EXPONENT = -745.0

_LN_2PI = math.log(2.0 * math.pi)


def _check_unit(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr >= 0.0)) or np.any(~(arr <= 1.0)):
        raise DomainError("argument outside [0, 1]")
    return arr


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


@dataclass(frozen=True)
class LogWeight:
    """The preserved function ln_mu(x) = ln(1 + mu + x)."""

    mu: float

    def __post_init__(self):
        mu = float(self.mu)
        if not (mu > 0.0 and math.isfinite(mu)):
            raise ParameterError(f"mu must be a positive finite real, got {self.mu!r}")
        object.__setattr__(self, "mu", mu)

    def __call__(self, x):
        return ln_mu(self, x)

    @property
    def lower(self) -> float:
        """ln(1 + mu), the minimum of the weight on [0, 1]."""
        # same routine as ln_mu so that ln_mu(w, 0) == w.lower exactly
        return float(np.log1p(self.mu + 0.0))

    @property
    def upper(self) -> float:
        """ln(2 + mu), the maximum of the weight on [0, 1]."""
        return float(np.log1p(self.mu + 1.0))


def ln_mu(w: LogWeight, x):
    """Evaluate ln(1 + mu + x) for x in [0, 1]."""
    arr = _check_unit(x)
    return _scalar_or_array(np.log1p(w.mu + arr))


@dataclass(frozen=True)
class ReparamCurve:
    """The concave map a_m(x) = ln(1 + x eps) / ln(1 + eps), eps = 1/(m (1 + mu)).

    ``n_plus_1`` is the index m; the Kantorovich operator of degree n uses
    m = n + 1, the sampled operator uses m = n.
    """

    n_plus_1: int
    mu: float

    def __post_init__(self):
        if int(self.n_plus_1) != self.n_plus_1 or self.n_plus_1 < 1:
            raise ParameterError(f"n_plus_1 must be a positive integer, got {self.n_plus_1!r}")
        LogWeight(self.mu)
        object.__setattr__(self, "n_plus_1", int(self.n_plus_1))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def eps(self) -> float:
        return 1.0 / (self.n_plus_1 * (1.0 + self.mu))

    def __call__(self, x):
        return reparam(self, x)


def reparam(c: ReparamCurve, x):
    """a_{n+1}(x), exact at both endpoints and never below x.

    Rounding can push the quotient one ulp under x (or over 1); the result
    is clamped to [x, 1] since a_{n+1}(x) >= x holds exactly.
    """
    arr = _check_unit(x)
    eps = c.eps
    with np.errstate(invalid="ignore"):
        a = np.log1p(arr * eps) / math.log1p(eps)
    a = np.clip(np.maximum(a, arr), 0.0, 1.0)
    a = np.where(arr == 0.0, 0.0, np.where(arr == 1.0, 1.0, a))
    return _scalar_or_array(a)


def reparam_complement(c: ReparamCurve, x):
    """1 - a_{n+1}(x) without the cancellation of the naive subtraction."""
    arr = _check_unit(x)
    eps = c.eps
    b = np.log1p((1.0 - arr) * eps / (1.0 + arr * eps)) / math.log1p(eps)
    b = np.clip(np.minimum(b, 1.0 - arr), 0.0, 1.0)
    b = np.where(arr == 0.0, 1.0, np.where(arr == 1.0, 0.0, b))
    return _scalar_or_array(b)


def reparam_gap_limit(c: ReparamCurve, x):
    """The limit of n (a_{n+1}(x) - x): (x - x^2) / (2 (1 + mu))."""
    arr = _check_unit(x)
    return _scalar_or_array((arr - arr * arr) / (2.0 * (1.0 + c.mu)))


# --- Bernstein basis --------------------------------------------------------
#
# Loader's saddle-point form of the binomial probability: the log of
# binom(n,k) y^k (1-y)^(n-k) is assembled from Stirling remainders and the
# deviance term bd0, all O(1) quantities, and exponentiated once.  Plain
# lgamma differences lose ~log10(n) digits to cancellation at large n.

def _stirlerr_table(nmax=15):
    out = np.zeros(nmax + 1)
    for m in range(1, nmax + 1):
        log_fact = math.fsum(math.log(j) for j in range(2, m + 1))
        out[m] = math.fsum([log_fact, -(m + 0.5) * math.log(m), m, -0.5 * _LN_2PI])
    return out


_STIRLERR_SMALL = _stirlerr_table()
_S0, _S1, _S2, _S3, _S4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188


def _stirlerr(m):
    """ln(m!) - ln(sqrt(2 pi m) (m/e)^m) for integer arrays m >= 1."""
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=float)
    small = m <= 15
    out[small] = _STIRLERR_SMALL[m[small]]
    big = ~small
    if np.any(big):
        x = m[big].astype(float)
        xx = x * x
        val = np.where(
            x > 500, (_S0 - _S1 / xx) / x,
            np.where(
                x > 80, (_S0 - (_S1 - _S2 / xx) / xx) / x,
                np.where(
                    x > 35, (_S0 - (_S1 - (_S2 - _S3 / xx) / xx) / xx) / x,
                    (_S0 - (_S1 - (_S2 - (_S3 - _S4 / xx) / xx) / xx) / xx) / x,
                ),
            ),
        )
        out[big] = val
    return out


def _bd0(x, m):
    """Deviance term x ln(x/m) + m - x for x >= 0, m > 0.

    Written as m ((1+u) ln(1+u) - u) with u = (x-m)/m; the absolute error
    is O(eps |x - m|), which keeps the near-mode terms (|x-m| ~ sqrt(n))
    accurate to a few ulp.
    """
    u = (x - m) / m
    near = m * ((1.0 + u) * np.log1p(u) - u)
    # far from the mode (tiny m) the direct form has no cancellation and no inf - inf
    far = x * (np.log(x) - np.log(m)) + m - x
    return np.where(np.abs(u) < 1e3, near, far)


def _basis_values(n, k, y, yc):
    """p_{n,k}(y) for broadcastable integer k and reals y with complement yc."""
    k = np.asarray(k)
    y = np.asarray(y, dtype=float)
    yc = np.asarray(yc, dtype=float)
    shape = np.broadcast_shapes(k.shape, y.shape, yc.shape)
    if n == 0:
        return np.ones(shape)
    at0 = y == 0.0
    at1 = yc == 0.0
    edge = at0 | at1
    ys = np.where(edge, 0.5, y)
    ycs = np.where(edge, 0.5, yc)
    inner = (k > 0) & (k < n)
    kc = np.where(inner, k, 1)
    kf = kc.astype(float)
    stir = _stirlerr(np.arange(n + 1))
    # everything depending on k alone stays in k's shape
    with np.errstate(divide="ignore", under="ignore", over="ignore", invalid="ignore"):
        k_part = stir[n] - stir[kc] - stir[n - kc] - 0.5 * (_LN_2PI + np.log(kf) + np.log1p(-kf / n))
        out = np.exp(k_part - _bd0(kf, n * ys) - _bd0(n - kf, n * ycs))
        if np.any(k == 0):
            out = np.where(k == 0, np.exp(n * np.log(ycs)), out)
        if np.any(k == n):
            out = np.where(k == n, np.exp(n * np.log(ys)), out)
    if np.any(edge):
        out = np.where(at0, (k == 0).astype(float), out)
        out = np.where(at1, (k == n).astype(float), out)
    return np.broadcast_to(out, shape).copy() if out.shape != shape else out


def bernstein_basis(n: int, k, y, y_complement=None):
    """p_{n,k}(y) = binom(n,k) y^k (1-y)^(n-k) with 0^0 = 1.

    ``y_complement`` may carry an accurately computed 1 - y (see
    :func:`reparam_complement`); otherwise ``1 - y`` is used.
    """
    n = int(n)
    if n < 0:
        raise ParameterError("n must be nonnegative")
    karr = np.asarray(k)
    if np.any(karr < 0) or np.any(karr > n):
        raise DomainError("k must lie in [0, n]")
    yarr = _check_unit(y)
    yc = 1.0 - yarr if y_complement is None else _check_unit(y_complement)
    return _scalar_or_array(_basis_values(n, karr, yarr, yc))


def bernstein_matrix(n: int, y, y_complement=None) -> np.ndarray:
    """Matrix B[i, k] = p_{n,k}(y[i]) for a 1-d array of abscissae."""
    yarr = np.atleast_1d(_check_unit(y))
    yc = 1.0 - yarr if y_complement is None else np.atleast_1d(_check_unit(y_complement))
    k = np.arange(int(n) + 1)
    return _basis_values(int(n), k[None, :], yarr[:, None], yc[:, None])


def basis_integral(n: int, k: int) -> float:
    """Integral of p_{n,k} over [0, 1], which is 1/(n+1) for every k."""
    if not 0 <= k <= n:
        raise DomainError("k must lie in [0, n]")
    return 1.0 / (n + 1)


def king_moments(n: int, y):
    """Closed-form moments (m0, m1, m2) of the grid k/(n+1) under p_{n,k}(y)."""
    yarr = _check_unit(y)
    n1 = n + 1.0
    m0 = np.ones_like(yarr)
    m1 = n * yarr / n1
    m2 = (n * yarr + n * (n - 1.0) * yarr * yarr) / (n1 * n1)
    return _scalar_or_array(m0), _scalar_or_array(m1), _scalar_or_array(m2)


def king_moments_direct(n: int, y):
    """Debug path for :func:`king_moments`: the three sums evaluated term by term."""
    yarr = np.atleast_1d(_check_unit(y))
    P = bernstein_matrix(n, yarr)
    nodes = np.arange(n + 1) / (n + 1.0)
    out = (P.sum(axis=1), P @ nodes, P @ (nodes * nodes))
    if np.ndim(y) == 0:
        return tuple(float(v[0]) for v in out)
    return out


def _gap(c: ReparamCurve, x: float) -> float:
    return math.log1p(x * c.eps) / math.log1p(c.eps) - x


@lru_cache(maxsize=4096)
def _gamma_cached(m: int, mu: float) -> float:
    c = ReparamCurve(m, mu)
    lo, hi = 0.0, 1.0
    # a_{n+1}(x) - x is strictly concave, so ternary search is exact up to the bracket width.
    while hi - lo >= 1e-12:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if _gap(c, m1) < _gap(c, m2):
            lo = m1
        else:
            hi = m2
    return max(_gap(c, 0.5 * (lo + hi)), 0.0)


def gamma_n(c: ReparamCurve) -> float:
    """max over [0,1] of a_{n+1}(x) - x."""
    return _gamma_cached(c.n_plus_1, c.mu)


@dataclass(frozen=True)
class PaperConstants:
    n: int
    mu: float
    k_mu: float
    t_n: float
    lambda_n: float
    gamma_n: float
    gamma_n_cap: Optional[float] = None
    c_p: Optional[float] = None
    c_p_mu: Optional[float] = None
    p: Optional[float] = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def paper_constants(n: int, mu: float, p: Optional[float] = None, c_p: Optional[float] = None) -> PaperConstants:
    """Assemble K_mu, gamma_n, T_n, Lambda_n and, for p > 1, C_p, C_{p,mu}, Gamma_n.

    ``c_p`` overrides the maximal-function constant; the default is the
    one-sided Hardy bound p/(p-1).
    """
    if n < 2:
        raise ParameterError("the quantitative constants need n >= 2")
    w = LogWeight(mu)
    mu = w.mu
    k_mu = 1.0 + 1.0 / (1.0 + mu)
    g = gamma_n(ReparamCurve(n + 1, mu))
    t_n = 1.0 / (2.0 * (n + 1)) + math.sqrt(2.0) / math.sqrt(n + 1) + g
    ratio = w.upper / w.lower
    lam = ratio * (1.0 + 1.0 / ((1.0 + mu) * w.lower)) / (k_mu + 1.0) * t_n
    if p is None:
        return PaperConstants(n, mu, k_mu, t_n, lam, g)
    p = float(p)
    if not p > 1.0:
        raise ParameterError(f"maximal-function constants need p > 1, got {p}")
    cp = p / (p - 1.0) if c_p is None else float(c_p)
    if not cp > 0.0:
        raise ParameterError("C_p must be positive")
    cpmu = max(1.0 / ((1.0 + mu) * w.lower), cp)
    cap = 2.0 ** ((p - 1.0) / p) * cpmu * ratio / (k_mu + 1.0) * t_n
    return PaperConstants(n, mu, k_mu, t_n, lam, g, cap, cp, cpmu, p)
