"""Exception hierarchy.

Every error raised on bad input derives from :class:`LuckmeterError`, which
is itself a :class:`ValueError`, so callers can catch broadly or narrowly.
"""
from __future__ import annotations


class LuckmeterError(ValueError):
    """Base class for all input and degeneracy errors."""


class InvalidInputError(LuckmeterError):
    pass


class LengthMismatchError(LuckmeterError):
    pass


class ZeroVarianceError(LuckmeterError):
    """A correlation was requested on a constant input."""


class DegenerateMarginError(LuckmeterError):
    """A confusion-matrix margin is zero, so the correlation is undefined."""


class InsufficientSampleError(LuckmeterError):
    pass


class DegenerateRError(LuckmeterError):
    pass


class NonPositiveRangeError(LuckmeterError):
    pass


class InvalidCountsError(LuckmeterError):
    pass


class DegenerateDataError(LuckmeterError):
    """Input lacks one of the two classes. The CLI maps this to exit code 3."""


class NoPositivesError(DegenerateDataError):
    pass


class NoNegativesError(DegenerateDataError):
    pass


class NonFiniteScoreError(LuckmeterError):
    pass


class ThresholdOutOfRangeError(LuckmeterError):
    pass


class InvalidParamsError(LuckmeterError):
    pass


class EmptyCareerError(LuckmeterError):
    pass


class EmptyCurveError(LuckmeterError):
    pass


class ParseError(LuckmeterError):
    """Malformed CSV input. ``line`` is the 1-based physical line, if known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(ParseError):
    pass


class BadLabelError(ParseError):
    pass


class BadScoreError(ParseError):
    pass


class DuplicateIdError(ParseError):
    pass
