"""The 1/n term of the error and the functions that do better than 1/n.

n (L_n f - f)(x) converges to a second-order differential expression D(f).
Functions with D(f) = 0 are exactly those approximated faster than 1/n; they
form the two-parameter family ln_mu(x) (c1 + c2 * int w1).
"""

import numpy as np

from logkantorovich import Family, LogWeight, OperatorSpec, apply_grid, registry
from logkantorovich.analysis import (
    explicit_ode_lhs,
    saturation_solution,
    voronovskaja_check,
    voronovskaja_rhs,
)

MU = 1.0
w = LogWeight(MU)
reg = registry(MU)

# 1. Extrapolated limits against the closed form.
xs = [0.1, 0.3, 0.5, 0.7, 0.9]
for name in ("xlnmu", "x2", "sinpi"):
    table = voronovskaja_check(reg[name], w, xs, [128, 256, 512, 1024])
    print(f"\n{name}:  x    n*err(n=1024)   extrapolated      D(f)(x)    rel.err")
    for row in table.rows:
        print(f"      {row.x:.1f}  {row.scaled_errors[-1]:13.6f}  {row.limit:13.6f}  {row.rhs:11.6f}  {row.rel_error:9.2e}")

# 2. A nontrivial solution of D(f) = 0.  The closed form lives on a closed
# interior interval; the operator needs values on all of [0, 1], so the
# solution is continued by its second-order Taylor polynomials outside.
sol = saturation_solution(w, c1=1.0, c2=1.0)
inner = np.linspace(0.2, 0.8, 601)
print("\nODE residual on [0.2, 0.8]:", np.max(np.abs(explicit_ode_lhs(sol, w, inner))))

ext = sol.extended()
print("\n   n    n*sup|L_n f - f| (saturated)   n*sup|L_n x^2 - x^2| / sup|D(x^2)|")
d_sup = np.max(np.abs(voronovskaja_rhs(reg["x2"], w, np.linspace(0, 1, 1001))))
grid = np.linspace(0, 1, 1001)
for n in (64, 128, 256, 512, 1024):
    spec = OperatorSpec(Family.LOG_KANTOROVICH, n, MU)
    sat = n * np.max(np.abs(apply_grid(spec, ext, inner) - sol(inner)))
    quad = n * np.max(np.abs(apply_grid(spec, reg["x2"], grid) - grid**2)) / d_sup
    print(f"{n:5d}    {sat:12.5f}                    {quad:8.4f}")
