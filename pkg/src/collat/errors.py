"""Exception hierarchy shared by every module."""


class CollatError(Exception):
    """Base class for library errors."""


class DimensionError(CollatError, ValueError):
    """Operands have incompatible shapes or ambient dimensions."""


class ParseError(CollatError, ValueError):
    """Malformed scalar, matrix or vector text.

    ``line`` and ``column`` are 1-based and may be ``None`` when unknown.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class PreconditionError(CollatError, ValueError):
    """An operation was called outside its documented domain."""


class NotNilpotentError(PreconditionError):
    pass


class SpectrumError(PreconditionError):
    """The supplied eigenvalue list is not the exact spectrum."""


class NotSimilarError(PreconditionError):
    pass


class SingularMatrixError(PreconditionError):
    pass


class NoWitnessError(CollatError):
    """No commutant element reproduces ``T x``; refutes membership in Col(N)."""


class NoPermutationError(CollatError):
    """``T`` does not permute the primary components; refutes membership."""
