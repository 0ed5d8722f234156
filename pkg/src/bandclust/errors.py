"""Exception types raised by bandclust."""


class BandclustError(Exception):
    """Base class for all bandclust errors."""


class DimensionError(BandclustError, ValueError):
    """An arrangement or operand does not match the matrix shape."""


class ParseError(BandclustError, ValueError):
    """A matrix file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(BandclustError, ValueError):
    """A matrix file parsed but its declared dimensions are inconsistent."""


class ConfigError(BandclustError, ValueError):
    """Invalid solver, generator or schedule parameters."""


class ScheduleError(BandclustError, ValueError):
    """A migration schedule cannot be built from the given trajectory."""


class SearchSpaceError(BandclustError, ValueError):
    """Exhaustive enumeration was refused because the space is too large."""


class InputError(BandclustError, ValueError):
    """The input matrix is unusable (e.g. empty)."""
