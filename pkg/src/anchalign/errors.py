"""Exception types shared across the aligner.

Every error carries a short stable ``code`` string that the CLI prints in
diagnostics, so callers can distinguish failure kinds without matching on
message text.
"""


class AlignerError(Exception):
    code = "error"


class ConfigError(AlignerError):
    code = "bad-config"


class MatrixFormatError(AlignerError):
    """Base class for embedding matrix I/O failures."""

    code = "bad-matrix"


class MalformedHeaderError(MatrixFormatError):
    code = "malformed-header"


class TruncatedDataError(MatrixFormatError):
    code = "truncated-data"


class RowLengthMismatchError(MatrixFormatError):
    code = "row-length-mismatch"


class NonFiniteValueError(MatrixFormatError):
    code = "non-finite-value"


class EmptyMatrixError(MatrixFormatError):
    code = "empty-matrix"


class ZeroRowError(AlignerError):
    code = "zero-row"

    def __init__(self, index: int):
        super().__init__(f"row {index} has near-zero norm and cannot be normalized")
        self.index = index


class DimMismatchError(AlignerError):
    code = "dim-mismatch"


class RowCountMismatchError(AlignerError):
    code = "row-count-mismatch"


class EmptyIntervalsError(AlignerError):
    code = "empty-intervals"


class IllegalShapeError(AlignerError):
    code = "illegal-shape"


class ZeroLengthError(AlignerError):
    code = "zero-length"


class NoPathError(AlignerError):
    code = "no-path"


class GoldParseError(AlignerError):
    code = "parse-error"

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
