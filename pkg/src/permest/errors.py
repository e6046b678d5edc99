"""Exception types raised by permest."""


class PermestError(Exception):
    """Base class for all permest errors."""


class InvalidMatrix(PermestError, ValueError):
    """Input is not a finite square real matrix."""


class NotSymmetric(PermestError, ValueError):
    pass


class NotPsd(PermestError, ValueError):
    pass


class DimensionMismatch(PermestError, ValueError):
    pass


class NegativeEntry(PermestError, ValueError):
    pass


class TooLarge(PermestError, ValueError):
    """Instance exceeds the size limit of an exact (exponential-time) method."""


class Disconnected(PermestError, ValueError):
    pass


class WrongColorCount(PermestError, ValueError):
    pass


class BadParameter(PermestError, ValueError):
    pass


class BadSpectrum(PermestError, ValueError):
    pass


class QuadratureFailure(PermestError, ArithmeticError):
    pass


class ParseError(PermestError, ValueError):
    """Malformed input file; carries the 1-based line and column when known."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
