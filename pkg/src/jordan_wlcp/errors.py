"""Exception hierarchy shared by every module of the package."""


class JordanWLCPError(Exception):
    """Base class for all package errors."""


class InvalidInputError(JordanWLCPError, ValueError):
    """Malformed arguments, algebra mismatches, violated preconditions."""


class DomainError(JordanWLCPError, ValueError):
    """A spectral function was evaluated outside its domain."""


class NumericFailure(JordanWLCPError, ArithmeticError):
    """An internal numerical routine failed (non-convergence, singularity)."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class CapacityError(JordanWLCPError):
    """Problem size exceeds what an exhaustive enumeration can handle."""


class DegeneratePairError(JordanWLCPError):
    """Generic sampling kept hitting degenerate solutions."""


class ParseError(JordanWLCPError):
    """Instance file does not follow the schema.

    ``path`` names the offending field, e.g. ``"A.matrix[1]"``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ValidationError(JordanWLCPError):
    """Instance parsed but violates a semantic constraint (e.g. w not in the cone)."""


class GenerationFailure(JordanWLCPError):
    """Rejection sampling budget exhausted while generating an instance."""
