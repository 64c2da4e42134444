"""Log-log least-squares rate fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

__all__ = ["RateFit", "rate_fit"]


@dataclass(frozen=True)
class RateFit:
    exponent: float
    log_constant: float
    r_squared: float
    low_confidence: bool = False
    stderr: float = 0.0  # standard error of the exponent

    def predict(self, n):
        return np.exp(self.log_constant) * np.asarray(n, dtype=float) ** self.exponent


def rate_fit(ns, errs) -> RateFit:
    """Fit err ~ C n^exponent by least squares on (ln n, ln err).

    ``low_confidence`` is set when the errors span less than two decades
    and the fit explains less than 90% of the variance.
    """
    x = np.log(np.asarray(ns, dtype=float))
    e = np.asarray(errs, dtype=float)
    if x.size != e.size:
        raise ParameterError("ns and errs must have the same length")
    if x.size < 3:
        raise ParameterError("rate_fit needs at least 3 points")
    if not np.all(np.isfinite(e)) or np.any(e <= 0.0):
        raise ParameterError("rate_fit needs strictly positive finite errors")
    if np.ptp(x) == 0.0:
        raise ParameterError("rate_fit needs at least two distinct n")
    y = np.log(e)
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - intercept - slope * x) ** 2))
    # A perfect fit (including constant data) has nothing left to explain.
    if ss_tot <= 1e-28 * max(1.0, float(np.sum(y * y))):
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    decades = float(np.ptp(y)) / np.log(10.0)
    stderr = float(np.sqrt(ss_res / (x.size - 2) / sxx)) if x.size > 2 else 0.0
    return RateFit(slope, intercept, r2, bool(decades < 2.0 and r2 < 0.9), stderr)
