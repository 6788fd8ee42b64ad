"""
Exceptions raised by the sugra47 library.
"""


class Sugra47Error(ValueError):
    """Base class for every error raised on purpose by the library."""


class StructuralError(Sugra47Error):
    """The input does not have the shape an operation works on
    (frame or degree mismatch, non-closure under the bracket, d^2 != 0, ...)."""


class PreconditionError(Sugra47Error):
    """The input is well formed but violates the precondition of an operation."""


class InexactScalarError(Sugra47Error):
    """An exact computation needs a root that is not a rational number."""
