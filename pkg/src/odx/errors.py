"""Exception types shared across the package."""


class OdxError(Exception):
    """Base class for every error raised by odx."""


class NotHermitian(OdxError):
    pass


class NotPsd(OdxError):
    pass


class NotUnitary(OdxError):
    pass


class IndexOutOfRange(OdxError):
    pass


class WidthMismatch(OdxError):
    pass


class DimensionMismatch(OdxError):
    pass


class SizeMismatch(OdxError):
    pass


class EmptyEnsemble(OdxError):
    pass


class NegativeEigenvalue(OdxError):
    pass


class TooLarge(OdxError):
    pass


class UnsupportedShape(OdxError):
    pass


class ZeroVector(OdxError):
    pass


class ParseError(OdxError):
    """Input text could not be parsed; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
