"""Compare the logarithmic Kantorovich operator with its baselines.

The logarithmic operator reproduces ln(1 + mu + x) to rounding error, where
every baseline leaves an O(1/n) error.  On other smooth functions all
families converge like 1/n with constants of the same size, and on the kink
|x - 1/2| the rate drops to about 1/sqrt(n).

Run:  python demos/01_convergence.py [output.svg]
"""

import sys

import numpy as np

from logkantorovich import Family, OperatorSpec, apply_grid, registry
from logkantorovich.analysis import rate_fit

MU = 1.0
NS = [16, 32, 64, 128, 256, 512, 1024]
x = np.linspace(0.0, 1.0, 1001)
reg = registry(MU)


def sup_error(family, f, n):
    return np.max(np.abs(apply_grid(OperatorSpec(family, n, MU), f, x) - f(x)))


print("sup-norm error at n = 256")
print(f"{'function':>10} " + " ".join(f"{fam.value:>22}" for fam in Family))
for name in ("lnmu", "xlnmu", "sinpi", "absmid"):
    f = reg[name]
    row = " ".join(f"{sup_error(fam, f, 256):22.3e}" for fam in Family)
    print(f"{name:>10} {row}")

# Fitted rates for the logarithmic operator.  Smooth functions follow the
# second-order (Voronovskaja) rate, the kink only the first-order one.
print("\nfitted exponent of the sup error of the logarithmic operator, n = 16..1024")
curves = {}
for name in ("xlnmu", "sinpi", "absmid", "hat"):
    errs = [sup_error(Family.LOG_KANTOROVICH, reg[name], n) for n in NS]
    fit = rate_fit(NS, errs)
    curves[name] = errs
    print(f"  {name:>7}: exponent {fit.exponent:+.3f}   r^2 {fit.r_squared:.4f}")

if len(sys.argv) > 1:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, errs in curves.items():
        ax.loglog(NS, errs, "o-", label=name)
    ax.set_xlabel("n")
    ax.set_ylabel("sup error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(sys.argv[1])
    print(f"\nwrote {sys.argv[1]}")
