"""Independent high-precision reference implementations used by the tests.

Nothing here imports the numerical kernels of the package: expressions are
evaluated from their syntax tree with mpmath, and operators are summed term
by term with mpmath binomials and mpmath.quad cell integrals.
"""

import mpmath

from logkantorovich.funcexpr.ast import BinOp, Call, Const, Neg, Num, Var


def mp_eval(node, x, mu=None):
    """Evaluate a syntax tree at the mpmath number x."""
    if isinstance(node, Num):
        return mpmath.mpf(node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return mpmath.pi if node.name == "pi" else mpmath.e
    if isinstance(node, Neg):
        return -mp_eval(node.operand, x, mu)
    if isinstance(node, BinOp):
        a = mp_eval(node.left, x, mu)
        b = mp_eval(node.right, x, mu)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        if b == int(b):
            return a ** int(b)
        if a < 0:
            raise ValueError("negative base with fractional exponent")
        return mpmath.power(a, b)
    if isinstance(node, Call):
        args = [mp_eval(a, x, mu) for a in node.args]
        f = node.func
        if f == "exp":
            return mpmath.exp(args[0])
        if f == "ln":
            if args[0] <= 0:
                raise ValueError("log of nonpositive number")
            return mpmath.log(args[0])
        if f == "sin":
            return mpmath.sin(args[0])
        if f == "cos":
            return mpmath.cos(args[0])
        if f == "abs":
            return abs(args[0])
        if f == "lnmu":
            return mpmath.log(1 + mpmath.mpf(mu) + args[0])
        if f == "min":
            return min(args)
        if f == "max":
            return max(args)
    raise TypeError(f"unknown node {node!r}")


def mp_reparam(n_plus_1, mu, x):
    eps = 1 / (mpmath.mpf(n_plus_1) * (1 + mpmath.mpf(mu)))
    return mpmath.log(1 + mpmath.mpf(x) * eps) / mpmath.log(1 + eps)


def mp_log_kantorovich(f, n, mu, x, dps=30):
    """Direct summation of the log-preserving Kantorovich operator.

    ``f`` is a FuncExpr; cell integrals of f/ln_mu use mpmath.quad with
    breakpoints at the kinks of f.
    """
    with mpmath.workdps(dps):
        mu_ = mpmath.mpf(mu)
        x_ = mpmath.mpf(x)
        a = mp_reparam(n + 1, mu, x_)
        g = lambda t: mp_eval(f.ast, t, mu) / mpmath.log(1 + mu_ + t)
        total = mpmath.mpf(0)
        for k in range(n + 1):
            lo = mpmath.mpf(k) / (n + 1)
            hi = mpmath.mpf(k + 1) / (n + 1)
            pts = [lo] + [mpmath.mpf(c) for c in f.kinks if lo < c < hi] + [hi]
            avg = (n + 1) * mpmath.quad(g, pts)
            total += mpmath.binomial(n, k) * a ** k * (1 - a) ** (n - k) * avg
        return mpmath.log(1 + mu_ + x_) * total


def mp_bernstein(n, k, y):
    y = mpmath.mpf(y)
    return mpmath.binomial(n, k) * y ** k * (1 - y) ** (n - k)
