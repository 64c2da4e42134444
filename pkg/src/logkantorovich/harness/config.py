"""Experiment configuration: key=value files, JSON files and validation.

Key=value format: one ``key = value`` per line, ``#`` starts a comment,
and a repeated key appends to a list.  A single line may also hold a
comma-separated list (``n_schedule = 16, 32, 64``).  Function expressions
may contain commas (``max(0, x)``), so ``functions`` is never split on
commas: give one function per line.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from typing import Optional, Tuple

import jsonschema

from ..errors import ConfigError
from ..funcexpr import REGISTRY_NAMES

__all__ = ["ExperimentConfig", "CHECKS", "load_config", "parse_kv", "config_from_dict", "SCHEMA"]

CHECKS = (
    "converge",
    "lp",
    "voronovskaja",
    "saturation",
    "modulus-bound",
    "kfunc-bound",
    "basis-inequality",
    "constants",
)

SCHEMA = json.loads(resources.files(__package__).joinpath("config_schema.json").read_text())

_LIST_KEYS = {"families", "n_schedule", "functions", "checks", "p_values", "x_points", "formats"}
_INT_KEYS = {"quad_order", "seed", "workers"}
_FLOAT_KEYS = {"mu", "quad_tol"}


@dataclass(frozen=True)
class ExperimentConfig:
    families: Tuple[str, ...] = ("LogKantorovich",)
    n_schedule: Tuple[int, ...] = (16, 32, 64, 128, 256)
    mu: float = 1.0
    functions: Tuple[str, ...] = REGISTRY_NAMES
    grid: str = "uniform:257"
    quad_order: int = 16
    quad_tol: float = 1e-12
    checks: Tuple[str, ...] = CHECKS
    p_values: Tuple[float, ...] = (2.0,)
    x_points: Tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    out: Optional[str] = None
    formats: Tuple[str, ...] = ("json",)
    seed: int = 0
    workers: int = 1

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def config_hash(self) -> str:
        """sha256 of the canonical JSON of every field that affects results."""
        d = self.to_dict()
        for k in ("out", "formats", "workers"):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def replace(self, **changes) -> "ExperimentConfig":
        d = self.to_dict()
        d.update(changes)
        return config_from_dict({k: v for k, v in d.items() if v is not None})


def _coerce_scalar(key, raw: str):
    try:
        if key in _INT_KEYS or key == "n_schedule":
            return int(raw)
        if key in _FLOAT_KEYS or key in ("p_values", "x_points"):
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as a number") from None
    return raw


def parse_kv(text: str) -> dict:
    """Parse the key=value format into a plain dict."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in _LIST_KEYS:
            parts = [value] if key == "functions" else [v.strip() for v in value.split(",") if v.strip()]
            out.setdefault(key, []).extend(_coerce_scalar(key, v) for v in parts)
        else:
            if key in out:
                raise ConfigError(f"line {lineno}: {key} given twice")
            out[key] = _coerce_scalar(key, value)
    return out


def config_from_dict(d: dict) -> ExperimentConfig:
    """Validate against the schema plus the cross-field rules."""
    try:
        jsonschema.validate(d, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "config"
        raise ConfigError(f"{where}: {exc.message}") from None
    known = {f.name for f in fields(ExperimentConfig)}
    kw = {k: tuple(v) if isinstance(v, list) else v for k, v in d.items() if k in known}
    cfg = ExperimentConfig(**kw)
    ns = cfg.n_schedule
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError("n_schedule must be strictly increasing")
    if not cfg.functions:
        raise ConfigError("at least one function is required")
    if len(set(cfg.checks)) != len(cfg.checks):
        raise ConfigError("checks must not repeat")
    return cfg


def load_config(path: str) -> ExperimentConfig:
    """Read a .json file or a key=value file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    if path.endswith(".json") or text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    else:
        d = parse_kv(text)
    return config_from_dict(d)
