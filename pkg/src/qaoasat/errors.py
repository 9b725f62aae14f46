"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a request would exceed the exponential-memory cap (2**n arrays)."""


class DimacsError(ValueError):
    """Malformed DIMACS CNF input.

    Carries the 1-based line number where parsing failed.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
