"""Command line: eval, suite, report and constants.

Exit codes: 0 success, 1 at least one failing check (reports are still
written), 2 configuration or usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from typing import List, Optional

import numpy as np

from ..basis import paper_constants
from ..errors import ConfigError, LogKantorovichError
from ..funcexpr import resolve_function
from ..operators import Family, OperatorSpec, apply_grid
from ..quadrature import QuadratureRule
from .config import CHECKS, ExperimentConfig, load_config
from .report import emit, loads
from .run import run

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> List[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _formats(values) -> List[str]:
    out = []
    for v in values or []:
        for s in v.split(","):
            s = s.strip()
            if s not in ("csv", "json", "svg"):
                raise ConfigError(f"unknown format {s!r}")
            if s not in out:
                out.append(s)
    return out


def _common(p):
    p.add_argument("--mu", type=float, help="weight parameter mu > 0")
    p.add_argument("--n-schedule", help="comma-separated degrees, e.g. 16,32,64")
    p.add_argument("--quad-order", type=int, help="Gauss-Legendre points per panel")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logkantorovich", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pe = sub.add_parser("eval", help="apply one operator to one function")
    _common(pe)
    pe.add_argument("--function", required=True, help="registry name or expression")
    pe.add_argument("--family", default="LogKantorovich", choices=[f.value for f in Family])
    pe.add_argument("--x", default="0,0.25,0.5,0.75,1", help="comma-separated evaluation points")

    ps = sub.add_parser("suite", help="run checks and write reports")
    _common(ps)
    ps.add_argument("--config", help="key=value or .json configuration file")
    ps.add_argument("--function", action="append", help="registry name or expression (repeatable)")
    ps.add_argument("--checks", help="comma-separated subset of: " + ", ".join(CHECKS))
    ps.add_argument("--out", help="output directory")
    ps.add_argument("--format", action="append", help="csv, json or svg (repeatable or comma-separated)")
    ps.add_argument("--seed", type=int, help="seed for randomized property checks")
    ps.add_argument("--workers", type=int, help="worker threads")

    pr = sub.add_parser("report", help="re-render a saved json report")
    pr.add_argument("--config", "--input", dest="input", required=True, help="report.json to render")
    pr.add_argument("--out", required=True, help="output directory")
    pr.add_argument("--format", action="append", help="csv, json or svg")

    pc = sub.add_parser("constants", help="print K_mu, gamma_n, T_n, Lambda_n and Gamma_n")
    _common(pc)
    pc.add_argument("--p", type=float, default=2.0, help="exponent for Gamma_n (needs p > 1)")
    return parser


def _cmd_eval(args, out) -> int:
    mu = 1.0 if args.mu is None else args.mu
    f = resolve_function(args.function, mu)
    ns = _int_list(args.n_schedule) if args.n_schedule else [16]
    x = np.array(_float_list(args.x))
    rule = QuadratureRule(order=args.quad_order) if args.quad_order else QuadratureRule()
    out.write("n,x,value,f(x)\n")
    for n in ns:
        vals = apply_grid(OperatorSpec(args.family, n, mu), f, x, rule)
        for xi, v in zip(x, vals):
            out.write(f"{n},{xi:.17g},{v:.17g},{f(xi):.17g}\n")
    return EXIT_OK


def _suite_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    if args.mu is not None:
        changes["mu"] = args.mu
    if args.n_schedule:
        changes["n_schedule"] = _int_list(args.n_schedule)
    if args.quad_order is not None:
        changes["quad_order"] = args.quad_order
    if args.function:
        changes["functions"] = args.function
    if args.checks is not None:
        changes["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    if args.out:
        changes["out"] = args.out
    fmts = _formats(args.format)
    if fmts:
        changes["formats"] = fmts
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.workers is not None:
        changes["workers"] = args.workers
    return cfg.replace(**changes) if changes else cfg


def _cmd_suite(args, out) -> int:
    cfg = _suite_config(args)
    report = run(cfg)
    out_dir = cfg.out or "."
    for fmt in cfg.formats:
        for path in emit(report, fmt, out_dir):
            out.write(f"wrote {path}\n")
    s = report.summary()
    out.write(f"{s['pass']} passed, {s['fail']} failed, {s['info']} informational\n")
    for r in report.failures:
        out.write(f"FAIL {r.check} {r.function or ''} n={r.n} {r.metric}: value={r.value:.6g} bound={r.bound}\n")
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def _cmd_report(args, out) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            report = loads(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{args.input} is not a report: {exc}") from None
    for fmt in _formats(args.format) or ["json"]:
        for path in emit(report, fmt, args.out):
            out.write(f"wrote {path}\n")
    return EXIT_OK


def _cmd_constants(args, out) -> int:
    mu = 1.0 if args.mu is None else args.mu
    ns = _int_list(args.n_schedule) if args.n_schedule else [16, 64, 256, 1024, 4096]
    out.write("n,mu,K_mu,gamma_n,T_n,Lambda_n,Gamma_n\n")
    for n in ns:
        c = paper_constants(n, mu, p=args.p)
        out.write(f"{n},{mu:g},{c.k_mu:.17g},{c.gamma_n:.17g},{c.t_n:.17g},{c.lambda_n:.17g},{c.gamma_n_cap:.17g}\n")
    return EXIT_OK


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        handler = {"eval": _cmd_eval, "suite": _cmd_suite, "report": _cmd_report, "constants": _cmd_constants}
        return handler[args.command](args, out)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except (LogKantorovichError, ValueError) as exc:
        # bad parameters reaching the library (mu <= 0, n < 2 for constants, parse errors)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_INTERNAL
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
