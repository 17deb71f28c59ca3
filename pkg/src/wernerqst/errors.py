"""Exception types shared across the package."""


class TomographyError(ValueError):
    """Base class for all errors raised by wernerqst."""


class DimensionMismatch(TomographyError):
    pass


class NotHermitian(TomographyError):
    pass


class NotPsd(TomographyError):
    pass


class TraceNotOne(TomographyError):
    pass


class ParameterOutOfRange(TomographyError):
    pass


class DegenerateParams(TomographyError):
    pass


class InvalidMean(TomographyError):
    pass


class ParseError(TomographyError):
    """Malformed input file. ``line`` is 1-based, or None if not line-specific."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
