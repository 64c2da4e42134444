"""Exception hierarchy shared by all subpackages."""


class LogKantorovichError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LogKantorovichError, ValueError):
    """An argument lies outside the interval where the quantity is defined."""


class ParameterError(LogKantorovichError, ValueError):
    """An invalid model parameter (mu, n, p, ...)."""


class ParseError(LogKantorovichError, ValueError):
    """Syntax error in a function expression.

    ``offset`` is the byte offset of the offending token and ``expected``
    the set of token kinds that would have been accepted there.
    """

    def __init__(self, message, offset=0, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = message + f" at offset {offset}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    pass


class ValidationError(LogKantorovichError, ValueError):
    """A parsed expression is not usable on [0, 1] (non-finite, unbound mu...)."""


class EvaluationError(LogKantorovichError, ArithmeticError):
    """Non-finite intermediate value during evaluation."""


class SmoothnessError(LogKantorovichError, ValueError):
    """Derivatives were requested from a function whose class forbids them."""


class QuadratureError(LogKantorovichError, ArithmeticError):
    """Adaptive quadrature did not converge within ``max_depth`` bisections."""

    def __init__(self, message, residual=float("nan"), context=None):
        self.residual = residual
        self.context = dict(context or {})
        if self.context:
            message += " [" + ", ".join(f"{k}={v}" for k, v in self.context.items()) + "]"
        super().__init__(f"{message} (residual estimate {residual:.3e})")


class ResolutionError(LogKantorovichError, ValueError):
    """The sampling grid is too coarse for the requested estimate."""


class ConfigError(LogKantorovichError, ValueError):
    """Invalid experiment configuration."""
