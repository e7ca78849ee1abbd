"""Exception types raised by symquant.

Everything derives from :class:`SymquantError` (itself a ``ValueError``) so
callers, including the CLI, can treat bad input uniformly.
"""


class SymquantError(ValueError):
    """Base class for input-validation failures."""


class DimensionError(SymquantError):
    """Operands have incompatible dimensions or unit labels."""


class SingularTransformError(SymquantError):
    """A shear matrix is singular to working tolerance."""


class DomainError(SymquantError):
    """An argument lies outside an operation's domain."""


class EmptyConditionError(SymquantError, ZeroDivisionError):
    """Conditioning on an event of zero value (zero source node or zero evidence)."""


class InvalidTreeError(SymquantError):
    pass


class ClassificationError(SymquantError):
    """An associative, non-degenerate product has no two-sided identity."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NonUnitaryError(SymquantError):
    def __init__(self, message, deviation):
        super().__init__(message)
        self.deviation = deviation


class NetworkError(SymquantError):
    """Malformed network specification (cycle, bad arity, bad weights)."""
