"""Exception types shared across the package."""


class VatwistError(Exception):
    """Base class for all errors raised by vatwist."""


class DivisionByZero(VatwistError, ZeroDivisionError):
    pass


class OrderMismatch(VatwistError, ValueError):
    """Operands carry different nilpotency orders."""


class NotInvertible(VatwistError, ArithmeticError):
    """The semisimple part needed for an inverse vanishes."""


class IndexOutOfRange(VatwistError, IndexError):
    pass


class ZeroSeries(VatwistError, ValueError):
    """Leading data was requested from a series with no known terms."""


class BranchOutOfRange(VatwistError, ValueError):
    pass


class NoRootInField(VatwistError, ArithmeticError):
    """A root does not exist in the working cyclotomic field.

    ``required_conductor`` is the smallest conductor that would contain it,
    or ``None`` if no cyclotomic field does.
    """

    def __init__(self, message, required_conductor=None):
        super().__init__(message)
        self.required_conductor = required_conductor


class ExistenceFailed(VatwistError, ValueError):
    """No module exists for the given parameters; ``clause`` names why."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class TruncationTooSmall(VatwistError, ValueError):
    pass


class WindowExceedsTruncation(VatwistError, ValueError):
    """A Borcherds window needs modes beyond the known part of a series."""
