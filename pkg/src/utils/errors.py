"""Exception types raised by the toolkit."""
from typing import Optional


class ToolkitError(ValueError):
    """Base class for every error the library raises on bad input."""

    exit_code = 2


class NonSquare(ToolkitError):
    """Matrix is not square."""


class NonHermitian(ToolkitError):
    """Matrix deviates from its adjoint by more than the allowed tolerance."""


class NotPsd(ToolkitError):
    """Matrix has an eigenvalue below the clipping band."""


class TraceNotOne(ToolkitError):
    """Trace differs from one by more than the allowed tolerance."""


class DimensionMismatch(ToolkitError):
    """Operand shapes do not fit together."""


class BadRank(ToolkitError):
    """Requested rank is outside 1..dim."""


class NotNormalized(ToolkitError):
    """State vector does not have unit norm."""


class NotUnitary(ToolkitError):
    """Basis matrix is not unitary."""


class NotComplete(ToolkitError):
    """Kraus operators or POVM effects do not resolve the identity."""


class PriorsSum(ToolkitError):
    """Ensemble priors are negative or do not sum to one."""


class CountMismatch(ToolkitError):
    """Number of POVM effects differs from the number of ensemble members."""


class WrongMemberCount(ToolkitError):
    """Operation needs a different number of ensemble members."""


class NotXPattern(ToolkitError):
    """Matrix has weight outside the diagonal and anti-diagonal."""


class NotInvertible(ToolkitError):
    """State is singular where an invertible one is required."""


class NumericalFailure(ToolkitError):
    """A numerical routine failed to produce a trustworthy result."""

    exit_code = 3


class DocumentError(ToolkitError):
    """Base class for JSON document problems."""


class DocumentSyntaxError(DocumentError):
    """Input bytes are not valid UTF-8 JSON."""


class SchemaError(DocumentError):
    """Document does not match the expected layout."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{message} (at {path or '/'})")
        self.path = path or "/"


class DocumentValidationError(DocumentError):
    """Parsed object fails a domain invariant."""

    def __init__(self, message: str, which: Optional[str] = None):
        super().__init__(message)
        self.which = which


class NotFinite(ToolkitError):
    """Matrix contains NaN or infinite entries."""
