"""How tight are the quantitative error bounds?

Three estimates are checked against measured errors: the modulus-of-
continuity bound, and the two K-functional bounds (C^1 and W^{1,2}).  The
moduli are grid lower estimates and the K-functionals candidate upper
bounds, so a bound that holds here is a meaningful check, not a vacuous one.
"""

import math

import numpy as np

from logkantorovich import Family, LogWeight, OperatorSpec, apply_grid, paper_constants, registry
from logkantorovich.analysis import KVariant, NormKind, k_functional, modulus_omega, norm

MU = 1.0
w = LogWeight(MU)
reg = registry(MU)
x = np.linspace(0.0, 1.0, 1001)
up, lo = math.log(2 + MU), math.log1p(MU)
k_mu = 1 + 1 / (1 + MU)

print("constants:")
print("     n      gamma_n          T_n       Lambda_n      Gamma_n")
for n in (16, 64, 256, 1024, 4096):
    c = paper_constants(n, MU, p=2.0)
    print(f"{n:6d}  {c.gamma_n:11.4e}  {c.t_n:11.4e}  {c.lambda_n:11.4e}  {c.gamma_n_cap:11.4e}")

print("\nmodulus bound, error / bound:")
for name in ("sinpi", "absmid", "hat", "exp"):
    f = reg[name]
    fmu = lambda t, f=f: f(t) / np.log1p(MU + t)
    ratios = []
    for n in (16, 64, 256):
        c = paper_constants(n, MU)
        s = 1 / math.sqrt(n + 1)
        bound = modulus_omega(fmu, s) * up * (1 + s / 2 + math.sqrt(2)) + modulus_omega(fmu, c.gamma_n) * up
        err = np.max(np.abs(apply_grid(OperatorSpec(Family.LOG_KANTOROVICH, n, MU), f, x) - f(x)))
        ratios.append(err / bound)
    print(f"  {name:>7}: " + "  ".join(f"{r:.3f}" for r in ratios))

print("\nK-functional bounds at p = 2, error / bound (C^1 variant, W^{1,2} variant):")
for name in ("sinpi", "absmid", "hat"):
    f = reg[name]
    out = []
    for n in (16, 64, 256):
        spec = OperatorSpec(Family.LOG_KANTOROVICH, n, MU)
        diff = lambda t, spec=spec, f=f: apply_grid(spec, f, np.ravel(t)).reshape(np.shape(t)) - f(t)
        diff.kinks = f.kinks
        err = norm(diff, NormKind.lp(2.0))
        c = paper_constants(n, MU, p=2.0)
        k1 = k_functional(f, c.lambda_n, KVariant.PEETRE_C1, 2.0)
        k2 = k_functional(f, c.gamma_n_cap, KVariant.SOBOLEV_W1P, 2.0)
        scale = up / lo * (k_mu + 1)
        out.append(f"{err / (scale * k1.upper_bound):.3f}/{err / (scale * k2.upper_bound):.3f}")
    print(f"  {name:>7}: " + "  ".join(out))
