"""Exception types raised across the package."""


class CodeError(Exception):
    """Base class for all errors raised by divcodes."""


class ParseError(CodeError, ValueError):
    """Malformed matrix, enumerator or fixture text."""


class ZeroDimensional(CodeError):
    pass


class NotACodeword(CodeError):
    pass


class NotFullLength(CodeError):
    pass


class PointAbsent(CodeError):
    pass


class NotAnEnumerator(CodeError, ValueError):
    """MacWilliams transform produced a negative or fractional coefficient."""


class Inapplicable(CodeError):
    pass


class SpecInfeasible(CodeError):
    pass


class BudgetExceeded(CodeError):
    pass


class CheckpointMismatch(CodeError):
    """A checkpoint file was written for a different search spec."""
