"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: PreconditionError and ParseError mean
the input was unusable (exit 1), VerificationError means a computation
could not certify its own result (exit 2).
"""


class KonvexError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(KonvexError, ValueError):
    """An operation was called outside its documented domain."""


class DegeneracyError(PreconditionError):
    """Geometric input is degenerate (collinear ring, empty hull, ...)."""


class NotSimpleError(PreconditionError):
    """A polyline required to be simple self-intersects."""


class ParseError(KonvexError, ValueError):
    """A geometry or scene file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VerificationError(KonvexError):
    """A result failed its mandatory re-verification."""


class ConstructionError(VerificationError):
    """Curve construction exhausted its retries; carries the last report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
