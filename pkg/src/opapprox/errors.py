"""Exception types shared across the package."""


class OpApproxError(Exception):
    """Base class for all package errors."""


class InconsistentDims(OpApproxError):
    """Operand shapes do not describe a well-posed problem."""


class NotPsd(OpApproxError):
    """A weight matrix fails the Hermitian positive-semidefinite check."""


class UnsupportedIndex(OpApproxError):
    """A norm index is outside the range the operation supports."""


class NotInRange(OpApproxError):
    """A right-hand side lies outside the required range."""


class NoMinimum(OpApproxError):
    """The minimization problem has no attained minimum under the current rank decisions."""


class EquivalenceViolation(OpApproxError):
    """Conditions that must agree came out different; carries diagnostics.

    Signals a numerical rank-decision inconsistency, not a mathematical
    counterexample.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ParseError(OpApproxError):
    """Malformed manifest or matrix file (CLI exit code 64)."""


class DimensionError(OpApproxError):
    """Manifest roles missing or shapes inconsistent (CLI exit code 65)."""
