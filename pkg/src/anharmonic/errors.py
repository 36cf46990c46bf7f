"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`AnharmonicError`, which lets the CLI map them to exit code 3.
"""


class AnharmonicError(Exception):
    """Base class for all library errors."""


class DomainError(AnharmonicError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A series parameter sits on a pole (non-positive integer)."""


class OrderError(DomainError):
    """Bessel order not supported by the requested evaluation path."""


class DimensionError(AnharmonicError, ValueError):
    """Truncation dimension too small for the operation."""


class DegenerateLabelError(DomainError):
    """State label for which the requested superposition does not exist."""


class DegenerationError(DomainError):
    """Parameter value at which a closed form degenerates (confluent limit)."""


class EvaluationError(AnharmonicError, ArithmeticError):
    """A series or iteration failed to converge under its policy."""


class PrecisionError(EvaluationError):
    """Cancellation destroyed more significant digits than allowed."""


class TruncationError(AnharmonicError):
    """Truncated Fock space too small to hold the state to tolerance."""


class ContinuedFractionBreakdown(AnharmonicError, ZeroDivisionError):
    """An intermediate continued-fraction convergent vanished."""


class QuadratureError(EvaluationError):
    """A quadrature failed its node-doubling certification."""
