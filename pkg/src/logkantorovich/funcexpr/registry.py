"""Canonical test functions used by the experiments."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .expr import FuncExpr, parse, validate


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    source: str
    description: str
    nonnegative: bool = True


REGISTRY = (
    RegistryEntry("e0", "1", "constant one"),
    RegistryEntry("e1", "x", "identity"),
    RegistryEntry("x2", "x^2", "square"),
    RegistryEntry("xlnmu", "x*lnmu(x)", "x times the preserved weight"),
    RegistryEntry("lnmu", "lnmu(x)", "the preserved weight itself"),
    RegistryEntry("sinpi", "sin(pi*x)", "half sine wave"),
    RegistryEntry("exp", "exp(x)", "exponential"),
    RegistryEntry("absmid", "abs(x - 0.5)", "kink at one half"),
    RegistryEntry("hat", "max(0, 1 - 4*abs(x - 0.5))", "piecewise-linear hat, W^{1,p} but not C^1"),
)

REGISTRY_NAMES = tuple(e.name for e in REGISTRY)


@lru_cache(maxsize=64)
def registry(mu: float) -> dict:
    """Validated registry functions bound to ``mu``, keyed by name."""
    return {e.name: validate(parse(e.source, name=e.name), mu) for e in REGISTRY}


def resolve_function(spec: str, mu: float) -> FuncExpr:
    """A registry name or an expression source, validated at ``mu``."""
    spec = spec.strip()
    reg = registry(float(mu))
    if spec in reg:
        return reg[spec]
    return validate(parse(spec), mu)
