"""Exception types shared across the toolkit."""


class TwobidError(Exception):
    """Base class for all toolkit errors."""


class DomainError(TwobidError, ValueError):
    """Input outside the mathematical domain of an operation."""


class InsufficientDataError(TwobidError, ValueError):
    """Not enough samples/structure to run an estimator."""


class QuoteOrderError(TwobidError, ValueError):
    """Quotes arrived out of time order for a symbol."""


class ParseError(TwobidError, ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IllegalActionError(TwobidError, ValueError):
    """Game action not allowed in the current state; message carries the reason."""


class SearchBudgetExceeded(TwobidError, RuntimeError):
    """Exact game search aborted after exceeding its node budget."""
