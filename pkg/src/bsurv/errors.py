"""Exception types shared by all modules."""


class BsurvError(Exception):
    """Base class."""


class DomainError(BsurvError, ValueError):
    """Input outside the domain of an operation."""


class ParseError(BsurvError, ValueError):
    """A word or sequence could not be parsed.

    ``position`` is the digit index where parsing stopped, if known.
    """

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class ResourceError(BsurvError):
    """A configured cap (level, length, iterations) was exceeded."""


class PrecisionError(BsurvError):
    """The requested answer needs more precision than is available."""


class Undecided(PrecisionError):
    """Interval arithmetic could not decide a digit or a comparison.

    ``index`` is the step at which the enclosure became ambiguous.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BoundaryFlag(PrecisionError):
    """The base lies within the enclosure width of an interval endpoint."""
