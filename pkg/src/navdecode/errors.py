"""Exception types shared across the package."""


class NavDecodeError(Exception):
    """Base class for every error this package raises on bad input or state."""


class InvalidSeriesError(NavDecodeError, ValueError):
    """A series, panel or model value violates its construction invariants."""


class CsvParseError(InvalidSeriesError):
    """Malformed CSV input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class AlignmentError(NavDecodeError):
    """Series cannot be joined on a common date index."""


class InsufficientDataError(NavDecodeError):
    """Not enough observations for the requested computation."""


class UndefinedStatisticError(NavDecodeError):
    """The statistic is undefined for the given input (e.g. zero variance)."""


class NumericError(NavDecodeError):
    """A numerical operation produced non-finite or degenerate results."""


class DegenerateObservationError(NumericError):
    """Innovation variance is non-positive even after covariance repair."""


class ConfigError(NavDecodeError):
    """Pipeline or CLI configuration is invalid."""
