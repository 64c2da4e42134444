"""Validated test functions f: [0,1] -> R built from expression trees."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..errors import DomainError, EvaluationError, ParameterError, SmoothnessError, ValidationError
from .ast import CONSTANTS, BinOp, Call, Const, Neg, Num, Var, walk
from .jet import Jet
from .parser import parse_ast, to_source

VALIDATION_POINTS = 4097


class Smoothness(enum.IntEnum):
    C0 = 0
    C1 = 1
    C2 = 2
    ANALYTIC = 3

    @classmethod
    def coerce(cls, value):
        if value is None or isinstance(value, cls):
            return value
        if isinstance(value, str):
            return cls[value.upper()]
        return cls(value)


@dataclass(frozen=True)
class EvalJet:
    """Value and first two derivatives at one or more abscissae.

    ``d1_valid``/``d2_valid`` are False when the smoothness class of the
    function does not support that derivative (the numbers are then one-sided
    or subgradient values and must not be used).  ``kink`` marks points where
    an ``abs``/``min``/``max`` argument sits exactly on its switch.
    """

    value: object
    d1: object
    d2: object
    d1_valid: bool = True
    d2_valid: bool = True
    kink: object = False


@dataclass(frozen=True)
class FuncExpr:
    ast: object
    mu: Optional[float] = None
    smoothness: Optional[Smoothness] = None
    kinks: Tuple[float, ...] = ()
    validated: bool = False
    name: Optional[str] = field(default=None, compare=False)

    @property
    def source(self) -> str:
        return to_source(self.ast)

    @property
    def label(self) -> str:
        return self.name or self.source

    def uses_mu(self) -> bool:
        return any(isinstance(n, Call) and n.func == "lnmu" for n in walk(self.ast))

    def bind(self, mu: float) -> "FuncExpr":
        mu = float(mu)
        if not mu > 0.0:
            raise ParameterError("mu must be positive")
        if self.mu is not None and self.mu != mu:
            return validate(replace(self, mu=mu, validated=False, kinks=()), mu)
        return replace(self, mu=mu)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        _check_domain(arr)
        with np.errstate(all="ignore"):
            out = _values(self.ast, arr, self.mu)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"non-finite value of {self.label}")
        return float(out) if out.ndim == 0 else out

    def jet(self, x) -> EvalJet:
        return eval_jet(self, x)

    def __str__(self):
        return self.label


def _check_domain(arr):
    if arr.size and (np.min(arr) < 0.0 or np.max(arr) > 1.0 or np.isnan(arr).any()):
        raise DomainError("function expressions are evaluated on [0, 1] only")


def _lnmu_shift(mu):
    if mu is None:
        raise EvaluationError("lnmu used before mu was bound (call validate(f, mu))")
    return mu


def _values(node, x, mu):
    """Plain float evaluation; non-finite values propagate (checked by the caller)."""
    if isinstance(node, Num):
        return np.full_like(x, node.value)
    if isinstance(node, Var):
        return x.copy()
    if isinstance(node, Const):
        return np.full_like(x, CONSTANTS[node.name])
    if isinstance(node, Neg):
        return -_values(node.operand, x, mu)
    if isinstance(node, BinOp):
        a = _values(node.left, x, mu)
        b = _values(node.right, x, mu)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return np.power(a, b)
    if isinstance(node, Call):
        args = [_values(a, x, mu) for a in node.args]
        f = node.func
        if f == "exp":
            return np.exp(args[0])
        if f == "ln":
            return np.log(args[0])
        if f == "sin":
            return np.sin(args[0])
        if f == "cos":
            return np.cos(args[0])
        if f == "abs":
            return np.abs(args[0])
        if f == "lnmu":
            return np.log1p(_lnmu_shift(mu) + args[0])
        if f == "min":
            return np.minimum(args[0], args[1])
        if f == "max":
            return np.maximum(args[0], args[1])
    raise TypeError(f"unknown node {node!r}")


def _const_exponent(node):
    """Value of a subtree that does not depend on x, else None."""
    if any(isinstance(n, Var) for n in walk(node)):
        return None
    if any(isinstance(n, Call) and n.func == "lnmu" for n in walk(node)):
        return None
    with np.errstate(all="ignore"):
        v = float(_values(node, np.zeros(()), None))
    return v if np.isfinite(v) else None


def _jet(node, X: Jet, mu, kinks: list):
    if isinstance(node, Num):
        return Jet.constant(node.value, X.v)
    if isinstance(node, Var):
        return X
    if isinstance(node, Const):
        return Jet.constant(CONSTANTS[node.name], X.v)
    if isinstance(node, Neg):
        return -_jet(node.operand, X, mu, kinks)
    if isinstance(node, BinOp):
        a = _jet(node.left, X, mu, kinks)
        if node.op == "^":
            c = _const_exponent(node.right)
            if c is not None:
                return a.powc(c)
            b = _jet(node.right, X, mu, kinks)
            return (b * a.log()).exp()
        b = _jet(node.right, X, mu, kinks)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Call):
        args = [_jet(a, X, mu, kinks) for a in node.args]
        u = args[0]
        f = node.func
        if f == "exp":
            return u.exp()
        if f == "ln":
            return u.log()
        if f == "sin":
            return u.sin()
        if f == "cos":
            return u.cos()
        if f == "lnmu":
            return u.log1p_shift(_lnmu_shift(mu))
        if f == "abs":
            kinks.append(u.v == 0.0)
            return u.abs()
        a, b = args
        kinks.append(a.v == b.v)
        if f == "min":
            return Jet.select(a.v <= b.v, a, b)
        return Jet.select(a.v >= b.v, a, b)
    raise TypeError(f"unknown node {node!r}")


def eval_jet(f: FuncExpr, x) -> EvalJet:
    """(f, f', f'') at x by forward-mode dual numbers."""
    arr = np.asarray(x, dtype=float)
    _check_domain(arr)
    cls = f.smoothness if f.smoothness is not None else Smoothness.ANALYTIC
    d1_ok = cls >= Smoothness.C1
    d2_ok = cls >= Smoothness.C2
    kinks = []
    with np.errstate(all="ignore"):
        J = _jet(f.ast, Jet.variable(arr), f.mu, kinks)
    if not np.all(np.isfinite(J.v)):
        raise EvaluationError(f"non-finite value of {f.label}")
    if d1_ok and not np.all(np.isfinite(J.d1)):
        raise EvaluationError(f"non-finite first derivative of {f.label}")
    if d2_ok and not np.all(np.isfinite(J.d2)):
        raise EvaluationError(f"non-finite second derivative of {f.label}")
    kink = np.zeros(arr.shape, dtype=bool)
    for m in kinks:
        kink = kink | m
    if arr.ndim == 0:
        return EvalJet(float(J.v), float(J.d1), float(J.d2), d1_ok, d2_ok, bool(kink))
    return EvalJet(J.v, J.d1, J.d2, d1_ok, d2_ok, kink)


def require_c2(f) -> None:
    cls = getattr(f, "smoothness", None)
    if cls is None or cls < Smoothness.C2:
        raise SmoothnessError(f"{getattr(f, 'label', f)} is not declared C2 (class {cls!r})")


# --- validation ----------------------------------------------------------------


def _switch_points(u_node, grid, u_vals, mu):
    """Interior-or-endpoint zeros of a subtree on [0,1], refined by bisection."""
    out = []
    zero = np.flatnonzero(u_vals == 0.0)
    out.extend(float(grid[i]) for i in zero)
    s = np.sign(u_vals)
    change = np.flatnonzero(s[:-1] * s[1:] < 0)

    def g(t):
        with np.errstate(all="ignore"):
            return float(_values(u_node, np.asarray(t, dtype=float), mu))

    for i in change:
        out.append(brentq(g, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return out


def _analyze(node, grid, mu, kinks):
    """Return (values on grid, inferred smoothness) and collect switch points."""
    if isinstance(node, (Num, Var, Const)):
        return _values(node, grid, mu), Smoothness.ANALYTIC
    if isinstance(node, Neg):
        v, c = _analyze(node.operand, grid, mu, kinks)
        return -v, c
    if isinstance(node, BinOp):
        a, ca = _analyze(node.left, grid, mu, kinks)
        b, cb = _analyze(node.right, grid, mu, kinks)
        cls = min(ca, cb)
        if node.op == "^":
            c = _const_exponent(node.right)
            touches_zero = np.min(np.abs(a)) == 0.0 or np.any(np.sign(a[:-1]) * np.sign(a[1:]) < 0)
            if c is not None and c >= 0 and float(c).is_integer():
                pass
            elif touches_zero:
                if c is None:
                    cls = Smoothness.C0
                else:
                    cls = min(cls, Smoothness.C2 if c > 2 else Smoothness.C1 if c > 1 else Smoothness.C0)
        return _values(node, grid, mu), cls
    if isinstance(node, Call):
        parts = [_analyze(a, grid, mu, kinks) for a in node.args]
        cls = min(c for _, c in parts)
        if node.func == "abs":
            pts = _switch_points(node.args[0], grid, parts[0][0], mu)
        elif node.func in ("min", "max"):
            diff_node = BinOp("-", node.args[0], node.args[1])
            pts = _switch_points(diff_node, grid, parts[0][0] - parts[1][0], mu)
        else:
            pts = []
        if pts:
            cls = Smoothness.C0
            kinks.extend(pts)
        return _values(node, grid, mu), cls
    raise TypeError(f"unknown node {node!r}")


def validate(f, mu: Optional[float] = None, smoothness=None) -> FuncExpr:
    """Bind mu, check finiteness on [0,1], infer smoothness class and kinks.

    A declared ``smoothness`` (or one already carried by ``f``) takes
    precedence over the inferred class.
    """
    if isinstance(f, str):
        f = parse(f)
    if mu is not None:
        mu = float(mu)
        if not mu > 0.0:
            raise ParameterError("mu must be positive")
    elif f.mu is not None:
        mu = f.mu
    if mu is None and f.uses_mu():
        raise ValidationError(f"{f.label} uses lnmu but no mu was given")
    grid = np.linspace(0.0, 1.0, VALIDATION_POINTS)
    kinks: list = []
    with np.errstate(all="ignore"):
        vals, inferred = _analyze(f.ast, grid, mu, kinks)
    if not np.all(np.isfinite(vals)):
        raise ValidationError(f"{f.label} is not finite on [0, 1]")
    declared = Smoothness.coerce(smoothness) if smoothness is not None else f.smoothness
    cls = declared if declared is not None else inferred
    interior = tuple(sorted({float(k) for k in kinks if 0.0 < k < 1.0}))
    return replace(f, mu=mu, smoothness=cls, kinks=interior, validated=True)


def parse(src: str, smoothness=None, name: Optional[str] = None) -> FuncExpr:
    """Parse an expression; the result still needs :func:`validate` before use."""
    return FuncExpr(parse_ast(src), smoothness=Smoothness.coerce(smoothness), name=name)


def f_mu(f: FuncExpr, w) -> FuncExpr:
    """The composed expression f / lnmu(x) bound to the weight's mu."""
    mu = w.mu
    if f.mu is not None and f.mu != mu:
        raise ParameterError(f"{f.label} is bound to mu={f.mu}, not {mu}")
    node = BinOp("/", f.ast, Call("lnmu", (Var(),)))
    name = f"({f.name})_mu" if f.name else None
    return FuncExpr(node, mu=mu, smoothness=f.smoothness, kinks=f.kinks, validated=f.validated, name=name)
