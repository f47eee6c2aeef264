"""
Exception hierarchy for the auxwave engine.

Every error raised on purpose by the engine derives from ``AuxwaveError`` so the
management commands can map it onto a stable exit code.
"""


class AuxwaveError(Exception):
    """Base class for all engine errors."""


class ConfigError(AuxwaveError):
    """Malformed run configuration, parameter binding or recipe file."""


# Expression kernel


class ExpressionError(AuxwaveError):
    """Invalid symbolic expression or operation on one."""


class ParseError(ExpressionError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownFunctionError(ExpressionError):
    def __init__(self, name, position=None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown function '{name}'{where}")
        self.name = name
        self.position = position


class NotPolynomialError(ExpressionError):
    """The expression is not a polynomial in the requested symbol."""


# Numeric engine


class EvaluationError(AuxwaveError):
    """Numeric evaluation failed."""


class UnboundSymbolError(EvaluationError):
    def __init__(self, name):
        super().__init__(f"symbol '{name}' has no numeric binding")
        self.name = name


class PoleError(EvaluationError):
    """A pole or non-finite value was hit where a finite value was required."""


class QuadratureError(EvaluationError):
    """Adaptive quadrature did not reach its tolerance within the subdivision limit."""


class StencilError(PoleError):
    """A finite-difference stencil touched an excluded point."""


class VerificationError(EvaluationError):
    """Every grid point of a residual check was excluded."""


# Bernoulli solver and wave pipeline


class CatalogIndexError(AuxwaveError):
    def __init__(self, index):
        super().__init__(f"catalog index {index} out of range 1..20")
        self.index = index


class ReductionError(AuxwaveError):
    """Travelling-wave reduction requested in a mode that does not apply."""


class NoBalanceError(AuxwaveError):
    """No pair of terms balances at a positive integer order."""


class UnboundCoefficientError(AuxwaveError):
    def __init__(self, name):
        super().__init__(f"ansatz coefficient '{name}' is not bound")
        self.name = name


class UnsolvedError(AuxwaveError):
    def __init__(self, message, export_path=None):
        super().__init__(message)
        self.export_path = export_path
