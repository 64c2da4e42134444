"""A small expression language for test functions on [0,1] with automatic
first and second derivatives."""

from .ast import BinOp, Call, Const, Neg, Num, Var
from .expr import EvalJet, FuncExpr, Smoothness, eval_jet, f_mu, parse, require_c2, validate
from .jet import Jet
from .parser import parse_ast, to_source
from .registry import REGISTRY, REGISTRY_NAMES, registry, resolve_function

__all__ = [
    "BinOp", "Call", "Const", "Neg", "Num", "Var",
    "EvalJet", "FuncExpr", "Smoothness", "Jet",
    "eval_jet", "f_mu", "parse", "parse_ast", "require_c2", "to_source", "validate",
    "REGISTRY", "REGISTRY_NAMES", "registry", "resolve_function",
]
