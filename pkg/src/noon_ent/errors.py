"""Exception hierarchy shared by all modules."""


class NoonEntError(Exception):
    """Base class for every error raised by this package."""


class TraceError(NoonEntError, ValueError):
    pass


class PositivityError(NoonEntError, ValueError):
    pass


class LengthMismatch(NoonEntError, ValueError):
    pass


class DimensionMismatch(NoonEntError, ValueError):
    pass


class InvalidDistribution(NoonEntError, ValueError):
    pass


class MomentUnavailable(NoonEntError, KeyError):
    pass


class DegenerateUnresolvable(NoonEntError, ArithmeticError):
    """Raised when a degenerate coherence block has no resolvable limit.

    The offending operator is kept on ``.operator`` for manual inspection.
    """

    def __init__(self, message, operator=None, index=None):
        super().__init__(message)
        self.operator = operator
        self.index = index


class NoConvergence(NoonEntError, RuntimeError):
    """Numeric SEP iteration failed; ``.partial`` carries what was found."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ReconstructionFailure(NoonEntError, ArithmeticError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class IndexOutOfRange(NoonEntError, IndexError):
    pass


class UnsupportedModeCount(NoonEntError, ValueError):
    pass


class NotDiagonal(NoonEntError, ValueError):
    pass
