"""The experiment checks.  Each check expands into independent tasks; a task
returns a list of records.  Inequalities are always checked in the direction
where grid estimates make the check a necessary condition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..analysis import (
    KVariant,
    NormKind,
    k_functional,
    modulus_omega,
    norm,
    rate_fit,
    saturation_solution,
    voronovskaja_check,
    voronovskaja_rhs,
    explicit_ode_lhs,
)
from ..basis import LogWeight, bernstein_matrix, paper_constants
from ..funcexpr import FuncExpr, Smoothness, resolve_function
from ..grids import Grid
from ..operators import Family, OperatorSpec, apply_grid
from ..quadrature import QuadratureRule
from .config import ExperimentConfig
from .report import Record

__all__ = ["Context", "build_tasks", "MONOTONE_SLACK"]

MONOTONE_SLACK = 1.05
PRESERVATION_TOL = 1e-11
STABILITY_SLACK = 1e-8
POSITIVITY_TOL = -1e-12
LINEARITY_TOL = 1e-10
# rounding allowance for exact inequalities whose right side can be 0 (f = ln_mu)
ROUNDING_TOL = 1e-12


@dataclass
class Context:
    cfg: ExperimentConfig
    w: LogWeight
    rule: QuadratureRule
    grid: Grid
    functions: Dict[str, FuncExpr]

    @classmethod
    def from_config(cls, cfg: ExperimentConfig) -> "Context":
        kind, _, m = cfg.grid.partition(":")
        grid = Grid.uniform(int(m)) if kind == "uniform" else Grid.chebyshev(int(m))
        w = LogWeight(cfg.mu)
        funcs = {s: resolve_function(s, cfg.mu) for s in cfg.functions}
        return cls(cfg, w, QuadratureRule(order=cfg.quad_order, tol=cfg.quad_tol), grid, funcs)

    def spec(self, n, family=Family.LOG_KANTOROVICH):
        return OperatorSpec(family, n, self.w.mu)

    def sup_error(self, n, f, family=Family.LOG_KANTOROVICH, pts=None):
        x = self.grid.points if pts is None else pts
        return float(np.max(np.abs(apply_grid(self.spec(n, family), f, x, self.rule) - f(x))))


Task = Tuple[str, Callable[[], List[Record]]]


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _preserved(ctx: Context, f, family: Family) -> bool:
    x = ctx.grid.points
    fx = np.asarray(f(x), dtype=float)
    mu = ctx.w.mu
    targets = {
        Family.LOG_KANTOROVICH: [np.log1p(mu + x)],
        Family.EXP_KANTOROVICH: [np.exp(mu * x)],
        Family.CLASSICAL_BERNSTEIN: [np.ones_like(x), x],
        Family.CLASSICAL_KANTOROVICH: [np.ones_like(x)],
        Family.LOG_SAMPLED: [np.log1p(mu + x)],
    }[family]
    return any(np.max(np.abs(fx - t)) <= 1e-14 * max(1.0, np.max(np.abs(t))) for t in targets)


# --- converge ---------------------------------------------------------------


def _converge(ctx: Context, label: str, f) -> List[Record]:
    cfg, mu = ctx.cfg, ctx.w.mu
    rng = np.random.default_rng([cfg.seed, sum(label.encode())])
    e1 = resolve_function("e1", mu)
    recs = []
    nonneg = bool(np.min(f(np.linspace(0.0, 1.0, 4097))) >= 0.0)
    for fam_name in cfg.families:
        fam = Family(fam_name)
        preserved = _preserved(ctx, f, fam)
        errs = []
        for n in cfg.n_schedule:
            err = ctx.sup_error(n, f, fam)
            common = dict(check="converge", family=fam.value, n=n, mu=mu, function=label)
            if preserved:
                rec = Record(metric="sup_error", value=err, bound=PRESERVATION_TOL, tolerance=PRESERVATION_TOL,
                             verdict=_verdict(err <= PRESERVATION_TOL), params={"rule": "preservation"}, **common)
            elif fam is Family.LOG_KANTOROVICH and errs:
                bound = MONOTONE_SLACK * errs[-1]
                rec = Record(metric="sup_error", value=err, bound=bound, tolerance=MONOTONE_SLACK - 1.0,
                             verdict=_verdict(err <= bound), params={"rule": "monotone in n"}, **common)
            else:
                rec = Record(metric="sup_error", value=err, verdict="info", **common)
            recs.append(rec)
            errs.append(err)
            if nonneg:
                vals = apply_grid(ctx.spec(n, fam), f, ctx.grid.points, ctx.rule)
                lo = float(np.min(vals))
                recs.append(Record(metric="min_value", value=lo, bound=POSITIVITY_TOL, tolerance=1e-12,
                                   verdict=_verdict(lo >= POSITIVITY_TOL),
                                   params={"rule": "positivity", "plot": False}, **common))
            # linearity with seeded random coefficients
            a, b = rng.uniform(-2.0, 2.0, size=2)
            combo = lambda t, a=a, b=b: a * f(t) + b * e1(t)
            combo.kinks = f.kinks
            x = ctx.grid.points
            spec = ctx.spec(n, fam)
            lhs = apply_grid(spec, combo, x, ctx.rule)
            rhs = a * apply_grid(spec, f, x, ctx.rule) + b * apply_grid(spec, e1, x, ctx.rule)
            scale = 1.0 + abs(a) * np.max(np.abs(f(x))) + abs(b)
            dev = float(np.max(np.abs(lhs - rhs)) / scale)
            recs.append(Record(metric="linearity_defect", value=dev, bound=LINEARITY_TOL, tolerance=LINEARITY_TOL,
                               verdict=_verdict(dev <= LINEARITY_TOL),
                               params={"alpha": float(a), "beta": float(b), "plot": False}, **common))
        if len(errs) >= 3 and min(errs) > 0.0:
            fit = rate_fit(cfg.n_schedule, errs)
            recs.append(Record(check="converge", family=fam.value, mu=mu, function=label, metric="rate_exponent",
                               value=fit.exponent, verdict="info",
                               params={"r_squared": fit.r_squared, "stderr": fit.stderr}))
    return recs


# --- lp stability ---------------------------------------------------------------


def _lp(ctx: Context, label: str, f) -> List[Record]:
    mu = ctx.w.mu
    k_mu = 1.0 + 1.0 / (1.0 + mu)
    recs = []
    for p in ctx.cfg.p_values:
        kind = NormKind.lp_mu(p, mu)
        f_norm = norm(f, kind, rule=ctx.rule) ** p
        for n in ctx.cfg.n_schedule:
            spec = ctx.spec(n)
            Lf = lambda x, spec=spec: apply_grid(spec, f, np.ravel(x), ctx.rule).reshape(np.shape(x))
            lhs = norm(Lf, kind, rule=ctx.rule) ** p
            common = dict(check="lp", family=Family.LOG_KANTOROVICH.value, n=n, mu=mu, function=label)
            bound = k_mu * f_norm + STABILITY_SLACK
            recs.append(Record(metric=f"norm_pow_p{p:g}", value=lhs, bound=bound, tolerance=STABILITY_SLACK,
                               verdict=_verdict(lhs <= bound), params={"p": p, "constant": k_mu, "plot": False},
                               **common))
            sharp = (1.0 + 1.0 / ((n + 1) * (1.0 + mu))) * f_norm + STABILITY_SLACK
            recs.append(Record(metric=f"norm_pow_finite_n_p{p:g}", value=lhs, bound=sharp,
                               tolerance=STABILITY_SLACK, verdict=_verdict(lhs <= sharp),
                               params={"p": p, "plot": False}, **common))
    return recs


# --- voronovskaja -----------------------------------------------------------------


def _voronovskaja(ctx: Context, label: str, f) -> List[Record]:
    mu = ctx.w.mu
    common = dict(check="voronovskaja", family=Family.LOG_KANTOROVICH.value, mu=mu, function=label)
    if f.smoothness is None or f.smoothness < Smoothness.C2:
        return [Record(metric="skipped", value=0.0, verdict="info", params={"reason": "function is not C2"}, **common)]
    ns = ctx.cfg.n_schedule[-4:]
    if len(ns) < 4:
        return [Record(metric="skipped", value=0.0, verdict="info",
                       params={"reason": "needs at least 4 degrees"}, **common)]
    table = voronovskaja_check(f, ctx.w, np.array(ctx.cfg.x_points), ns, ctx.rule)
    recs = []
    for row in table.rows:
        recs.append(Record(metric=f"limit@x={row.x:g}", value=row.limit, bound=row.rhs, tolerance=0.02,
                           verdict=_verdict(row.agrees()),
                           params={"x": row.x, "n_schedule": list(ns), "scaled_errors": list(row.scaled_errors),
                                   "rel_tol": 0.02, "abs_tol": 1e-3},
                           **common))
    return recs


# --- saturation -------------------------------------------------------------------


def _saturation(ctx: Context) -> List[Record]:
    mu, w = ctx.w.mu, ctx.w
    fam = Family.LOG_KANTOROVICH.value
    ns = ctx.cfg.n_schedule
    recs = []
    lnmu = resolve_function("lnmu", mu)
    for n in ns:
        v = n * ctx.sup_error(n, lnmu)
        recs.append(Record(check="saturation", family=fam, n=n, mu=mu, function="lnmu", metric="n_sup_error",
                           value=v, bound=1e-9, tolerance=1e-9, verdict=_verdict(v <= 1e-9), params={"plot": False}))
    sol = saturation_solution(w, 1.0, 1.0, 0.5)
    ext = sol.extended()
    inner = np.linspace(0.2, 0.8, 121)
    resid = float(np.max(np.abs(explicit_ode_lhs(sol, w, inner))))
    recs.append(Record(check="saturation", mu=mu, function=sol.name, metric="ode_residual", value=resid,
                       bound=1e-6, tolerance=1e-6, verdict=_verdict(resid <= 1e-6)))
    scaled = []
    for n in ns:
        err = float(np.max(np.abs(apply_grid(ctx.spec(n), ext, inner, ctx.rule) - sol(inner))))
        scaled.append(n * err)
        recs.append(Record(check="saturation", family=fam, n=n, mu=mu, function=sol.name, metric="n_sup_error",
                           value=n * err, verdict="info", params={"interval": [0.2, 0.8]}))
    if ns[-1] >= 8 * ns[0]:
        ratio = scaled[-1] / scaled[0] if scaled[0] > 0 else 0.0
        recs.append(Record(check="saturation", family=fam, mu=mu, function=sol.name, metric="n_sup_error_ratio",
                           value=ratio, bound=0.5, tolerance=0.5, verdict=_verdict(ratio <= 0.5),
                           params={"n_first": ns[0], "n_last": ns[-1]}))
    x2 = resolve_function("x2", mu)
    x = ctx.grid.points
    d_sup = float(np.max(np.abs(voronovskaja_rhs(x2, w, x))))
    for n in ns:
        ratio = n * ctx.sup_error(n, x2) / d_sup
        banded = n >= 128
        recs.append(Record(check="saturation", family=fam, n=n, mu=mu, function="x2", metric="n_sup_error_over_D",
                           value=ratio, bound=1.2 if banded else None, tolerance=0.2 if banded else None,
                           verdict=_verdict(0.8 <= ratio <= 1.2) if banded else "info",
                           params={"band": [0.8, 1.2], "D_sup": d_sup, "plot": False}))
    return recs


# --- modulus bound ------------------------------------------------------------------


def _modulus_bound(ctx: Context, label: str, f) -> List[Record]:
    mu = ctx.w.mu
    up = ctx.w.upper
    fmu = lambda x: f(x) / np.log1p(mu + x)
    fscale = max(1.0, float(np.max(np.abs(f(ctx.grid.points)))))
    recs = []
    for n in ctx.cfg.n_schedule:
        if n < 2:
            continue
        c = paper_constants(n, mu)
        d1 = 1.0 / math.sqrt(n + 1)
        w1 = modulus_omega(fmu, d1)
        w2 = modulus_omega(fmu, c.gamma_n)
        bound = w1 * up * (1.0 + 1.0 / (2.0 * math.sqrt(n + 1)) + math.sqrt(2.0)) + w2 * up
        err = ctx.sup_error(n, f)
        tol = ROUNDING_TOL * fscale
        recs.append(Record(check="modulus-bound", family=Family.LOG_KANTOROVICH.value, n=n, mu=mu, function=label,
                           metric="sup_error", value=err, bound=bound, tolerance=tol,
                           verdict=_verdict(err <= bound + tol),
                           params={"omega_sqrt": w1, "omega_gamma": w2, "gamma_n": c.gamma_n}))
    return recs


# --- K-functional bounds ------------------------------------------------------------------


def _kfunc_bound(ctx: Context, label: str, f) -> List[Record]:
    mu = ctx.w.mu
    ratio = ctx.w.upper / ctx.w.lower
    k_mu = 1.0 + 1.0 / (1.0 + mu)
    fscale = max(1.0, float(np.max(np.abs(f(ctx.grid.points)))))
    recs = []
    for p in ctx.cfg.p_values:
        for n in ctx.cfg.n_schedule:
            if n < 2:
                continue
            spec = ctx.spec(n)
            diff = lambda x, spec=spec: apply_grid(spec, f, np.ravel(x), ctx.rule).reshape(np.shape(x)) - f(x)
            diff.kinks = f.kinks
            err = norm(diff, NormKind.lp(p), rule=ctx.rule)
            common = dict(check="kfunc-bound", family=Family.LOG_KANTOROVICH.value, n=n, mu=mu, function=label)
            c = paper_constants(n, mu, p=p if p > 1.0 else None)
            kr = k_functional(f, c.lambda_n, KVariant.PEETRE_C1, p)
            bound = ratio * (k_mu + 1.0) * kr.upper_bound
            tol = ROUNDING_TOL * fscale
            recs.append(Record(metric=f"lp_error_p{p:g}_C1", value=err, bound=bound, tolerance=tol,
                               verdict=_verdict(err <= bound + tol),
                               params={"t": c.lambda_n, "k_upper": kr.upper_bound, "candidate": kr.descriptor,
                                       "budget_exhausted": kr.exhausted}, **common))
            if p > 1.0:
                kr2 = k_functional(f, c.gamma_n_cap, KVariant.SOBOLEV_W1P, p)
                bound2 = ratio * (k_mu + 1.0) * kr2.upper_bound
                recs.append(Record(metric=f"lp_error_p{p:g}_W1p", value=err, bound=bound2, tolerance=tol,
                                   verdict=_verdict(err <= bound2 + tol),
                                   params={"t": c.gamma_n_cap, "k_upper": kr2.upper_bound,
                                           "candidate": kr2.descriptor, "budget_exhausted": kr2.exhausted},
                                   **common))
    return recs


# --- basis inequality ------------------------------------------------------------------


def basis_first_moment(n: int, y) -> np.ndarray:
    """sum_k |y - k/(n+1)| p_{n,k}(y) for every y."""
    P = bernstein_matrix(n, y)
    nodes = np.arange(n + 1) / (n + 1.0)
    return (P * np.abs(np.asarray(y)[:, None] - nodes[None, :])).sum(axis=1)


def _basis_inequality(ctx: Context) -> List[Record]:
    y = np.linspace(0.0, 1.0, 1001)
    recs = []
    for n in ctx.cfg.n_schedule:
        if n < 2:
            continue
        s = float(np.max(basis_first_moment(n, y)))
        bound = math.sqrt(2.0) / math.sqrt(n + 1)
        recs.append(Record(check="basis-inequality", n=n, metric="max_abs_first_moment", value=s, bound=bound,
                           tolerance=0.0, verdict=_verdict(s < bound)))
    return recs


# --- constants -------------------------------------------------------------------------------


def _constants(ctx: Context) -> List[Record]:
    mu = ctx.w.mu
    recs = []
    ns = [n for n in ctx.cfg.n_schedule if n >= 2]
    gammas = []
    for n in ns:
        ps = [p for p in ctx.cfg.p_values if p > 1.0]
        c = paper_constants(n, mu, p=ps[0] if ps else None)
        gammas.append(c.gamma_n)
        for key in ("k_mu", "gamma_n", "t_n", "lambda_n", "gamma_n_cap"):
            v = getattr(c, key)
            if v is None:
                continue
            recs.append(Record(check="constants", n=n, mu=mu, metric=key, value=float(v), verdict="info",
                               params={"p": c.p} if key == "gamma_n_cap" else {}))
    if len(ns) >= 3:
        fit = rate_fit(ns, gammas)
        ok = -1.1 <= fit.exponent <= -0.9
        recs.append(Record(check="constants", mu=mu, metric="gamma_n_rate_exponent", value=fit.exponent,
                           bound=-0.9, tolerance=0.1, verdict=_verdict(ok),
                           params={"window": [-1.1, -0.9], "r_squared": fit.r_squared}))
    return recs


# --- task expansion --------------------------------------------------------------------------------


_PER_FUNCTION = {
    "converge": _converge,
    "lp": _lp,
    "voronovskaja": _voronovskaja,
    "modulus-bound": _modulus_bound,
    "kfunc-bound": _kfunc_bound,
}
_GLOBAL = {
    "saturation": _saturation,
    "basis-inequality": _basis_inequality,
    "constants": _constants,
}


def build_tasks(ctx: Context) -> List[Task]:
    """Tasks in deterministic order: checks as configured, then functions as configured."""
    tasks: List[Task] = []
    for check in ctx.cfg.checks:
        if check in _PER_FUNCTION:
            fn = _PER_FUNCTION[check]
            for label, f in ctx.functions.items():
                tasks.append((f"{check}:{label}", lambda fn=fn, label=label, f=f: fn(ctx, label, f)))
        else:
            fn = _GLOBAL[check]
            tasks.append((check, lambda fn=fn: fn(ctx)))
    return tasks
