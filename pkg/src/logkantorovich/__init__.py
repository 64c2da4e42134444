"""Logarithm-preserving Kantorovich operators on [0, 1] and the numerical
machinery to test their approximation properties."""

__version__ = "0.1.0"

from .basis import (
    LogWeight,
    PaperConstants,
    ReparamCurve,
    bernstein_basis,
    bernstein_matrix,
    gamma_n,
    king_moments,
    ln_mu,
    paper_constants,
    reparam,
    reparam_complement,
)
from .errors import (
    ConfigError,
    DomainError,
    EvaluationError,
    LogKantorovichError,
    ParameterError,
    ParseError,
    QuadratureError,
    ResolutionError,
    SmoothnessError,
    UnknownIdentifierError,
    ValidationError,
)
from .funcexpr import FuncExpr, Smoothness, eval_jet, f_mu, parse, registry, resolve_function, validate
from .grids import Grid
from .operators import Family, OperatorSpec, apply, apply_grid
from .quadrature import QuadratureRule, cell_average, integrate

__all__ = [
    "__version__",
    "LogWeight", "ReparamCurve", "PaperConstants", "ln_mu", "reparam", "reparam_complement",
    "bernstein_basis", "bernstein_matrix", "king_moments", "gamma_n", "paper_constants",
    "FuncExpr", "Smoothness", "parse", "validate", "eval_jet", "f_mu", "registry", "resolve_function",
    "QuadratureRule", "integrate", "cell_average",
    "Family", "OperatorSpec", "apply", "apply_grid", "Grid",
    "LogKantorovichError", "DomainError", "ParameterError", "ParseError", "UnknownIdentifierError",
    "ValidationError", "EvaluationError", "SmoothnessError", "QuadratureError", "ResolutionError", "ConfigError",
]
