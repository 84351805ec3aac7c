"""Exception hierarchy shared by every etlab module."""


class EtlabError(Exception):
    """Base class for all engine errors."""


class ShapeMismatchError(EtlabError, ValueError):
    """Two jets or tensors with incompatible dimensions were combined."""


class OrderExhaustedError(EtlabError, ArithmeticError):
    """A derivative was requested beyond the configured jet order.

    ``required`` is the jet order that would have been needed, when known.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class DomainError(EtlabError, ArithmeticError):
    """An expression was evaluated outside its domain (log of non-positive, ...)."""

    def __init__(self, message, node=None, point=None):
        super().__init__(message)
        self.node = node
        self.point = point


class ExpressionSyntaxError(EtlabError, ValueError):
    """An expression string could not be parsed."""

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class NumericError(EtlabError, ArithmeticError):
    """Degenerate numerics: singular metric, singular linear system, etc."""


class NearZeroPotentialError(NumericError):
    """|f| fell below the potential guard at the evaluation point."""


class CriticalPointError(NumericError):
    """|grad f| fell below the regular-point guard."""


class UnsupportedDimensionError(EtlabError, ValueError):
    """The operation is undefined in the requested dimension."""


class ConfigError(EtlabError, ValueError):
    """Invalid run configuration."""
