"""
Exceptions raised by otmix.

Data errors derive from ValueError and numerical errors from ArithmeticError,
so callers may catch either the otmix class or the builtin.
"""


class OtmixError(Exception):
    """
    Base class for all otmix errors.
    """


class DataError(OtmixError, ValueError):
    """
    Input data violates a documented format or invariant.
    """


class FormatError(DataError):
    """
    Malformed text file.
    """

    def __init__(self, msg, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {msg}" if where else msg)


class ShapeMismatch(DataError):
    """
    Array shapes are inconsistent with each other.
    """


class DimensionMismatch(ShapeMismatch):
    """
    Embedding dimensions (columns) do not agree.
    """


class LengthMismatch(DataError):
    """
    Two sequences that must have the same length do not.
    """


class IndexOutOfRange(DataError, IndexError):
    """
    A 1-based index is outside its valid range.
    """


class AllZeroSequence(DataError):
    """
    Every row of a sequence has zero norm, so masses are undefined.
    """


class NumericalError(OtmixError, ArithmeticError):
    """
    A computation could not produce a trustworthy number.
    """


class NotConverged(NumericalError):
    """
    Iterative solver stopped at max_iters with violation above tol.
    """

    def __init__(self, msg, result=None):
        self.result = result
        super().__init__(msg)


class NumericalUnderflow(NumericalError):
    """
    Solver iterates underflowed or became non-finite.
    """


class DegenerateGradient(NumericalError):
    """
    The requested gradient does not exist at this point.
    """
