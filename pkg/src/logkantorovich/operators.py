"""The five approximation operator families on [0, 1].

``LogKantorovich`` is the logarithm-preserving Kantorovich operator

    L_n^K f(x) = ln_mu(x) sum_k p_{n,k}(a_{n+1}(x)) (n+1) int_{cell k} f(t)/ln_mu(t) dt,

the others are the baselines it is compared against.  Every family is a
matrix-vector product: basis weights (depending on x) times a vector of
sampled values or cell averages (independent of x, memoized).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .basis import LogWeight, ReparamCurve, bernstein_matrix, reparam, reparam_complement
from .errors import DomainError, ParameterError, QuadratureError
from .grids import as_points
from .quadrature import QuadratureRule, cell_averages

__all__ = ["Family", "OperatorSpec", "apply", "apply_grid", "coefficients", "basis_weights", "FLUSH_THRESHOLD"]

# Basis weights below this contribute < 1e-280 max|f_mu| and are dropped.
FLUSH_THRESHOLD = 1e-300


class Family(str, enum.Enum):
    LOG_KANTOROVICH = "LogKantorovich"
    LOG_SAMPLED = "LogSampled"
    CLASSICAL_BERNSTEIN = "ClassicalBernstein"
    CLASSICAL_KANTOROVICH = "ClassicalKantorovich"
    EXP_KANTOROVICH = "ExpKantorovich"

    @property
    def uses_mu(self) -> bool:
        return self in (Family.LOG_KANTOROVICH, Family.LOG_SAMPLED, Family.EXP_KANTOROVICH)

    @property
    def is_kantorovich(self) -> bool:
        return self in (Family.LOG_KANTOROVICH, Family.CLASSICAL_KANTOROVICH, Family.EXP_KANTOROVICH)


@dataclass(frozen=True)
class OperatorSpec:
    family: Family
    n: int
    mu: float = 1.0

    def __post_init__(self):
        fam = Family(self.family)
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be an integer >= 1, got {self.n!r}")
        mu = float(self.mu)
        if fam.uses_mu:
            LogWeight(mu)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "mu", mu)


def _kantorovich_integrand(spec: OperatorSpec, f: Callable) -> Callable:
    fam, mu = spec.family, spec.mu
    if fam is Family.LOG_KANTOROVICH:
        return lambda t: f(t) / np.log1p(mu + t)
    if fam is Family.EXP_KANTOROVICH:
        return lambda t: f(t) * np.exp(-mu * t)
    return f


@lru_cache(maxsize=512)
def _cached_coefficients(spec: OperatorSpec, f, rule: QuadratureRule) -> np.ndarray:
    n, fam, mu = spec.n, spec.family, spec.mu
    if fam.is_kantorovich:
        r = rule.with_kinks(getattr(f, "kinks", ()))
        c = cell_averages(r, _kantorovich_integrand(spec, f), n)
    else:
        nodes = np.arange(n + 1) / n
        vals = np.asarray(f(nodes), dtype=float) * np.ones(n + 1)
        c = vals / np.log1p(mu + nodes) if fam is Family.LOG_SAMPLED else vals
    c.setflags(write=False)
    return c


def coefficients(spec: OperatorSpec, f, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """The x-independent vector the basis weights multiply (cell averages or samples)."""
    rule = rule or QuadratureRule()
    try:
        return _cached_coefficients(spec, f, rule)
    except TypeError:
        # unhashable integrand: no memoization
        return _cached_coefficients.__wrapped__(spec, f, rule)


def basis_weights(spec: OperatorSpec, x) -> tuple:
    """(prefactor(x), P) with P[i, k] the k-th basis weight at x[i], flushed below threshold."""
    x = as_points(x)
    if np.any(~(x >= 0.0)) or np.any(~(x <= 1.0)):
        raise DomainError("evaluation points must lie in [0, 1]")
    n, fam, mu = spec.n, spec.family, spec.mu
    if fam is Family.LOG_KANTOROVICH or fam is Family.LOG_SAMPLED:
        curve = ReparamCurve(n + 1 if fam is Family.LOG_KANTOROVICH else n, mu)
        y, yc = reparam(curve, x), reparam_complement(curve, x)
        pref = np.log1p(mu + x)
    elif fam is Family.EXP_KANTOROVICH:
        m = n + 1
        den = math.expm1(mu / m)
        y = np.expm1(mu * x / m) / den
        yc = np.exp(mu * x / m) * np.expm1(mu * (1.0 - x) / m) / den
        y = np.where(x == 1.0, 1.0, np.clip(y, 0.0, 1.0))
        yc = np.where(x == 1.0, 0.0, np.clip(yc, 0.0, 1.0))
        pref = np.exp(mu * x)
    else:
        y, yc = x, 1.0 - x
        pref = np.ones_like(x)
    P = bernstein_matrix(n, np.atleast_1d(y), np.atleast_1d(yc))
    P[P < FLUSH_THRESHOLD] = 0.0
    return np.atleast_1d(pref), P


def apply_grid(spec: OperatorSpec, f, grid, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """Operator values at every grid point.

    Rows are reduced independently with numpy's pairwise summation, so
    the value at a point does not depend on which other points share the call.
    """
    x = as_points(grid)
    try:
        c = coefficients(spec, f, rule)
    except QuadratureError as exc:
        exc.context.setdefault("x", "any (cell integrals do not depend on x)")
        raise
    pref, P = basis_weights(spec, x)
    return pref * (P * c[None, :]).sum(axis=1)


def apply(spec: OperatorSpec, f, x: float, rule: Optional[QuadratureRule] = None) -> float:
    """Operator value at a single point."""
    return float(apply_grid(spec, f, np.array([float(x)]), rule)[0])
