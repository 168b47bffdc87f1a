"""Exception hierarchy shared by every module of the package."""


class FocError(Exception):
    """Base class for all focdigital errors."""


class InvalidParams(FocError, ValueError):
    """Controller or operator parameters violate their allowed ranges."""


class InvalidOrder(InvalidParams):
    """Fractional order outside 0 < |r| < 1."""


class DegenerateInput(FocError, ValueError):
    pass


class PoleAtEvaluationPoint(FocError, ZeroDivisionError):
    pass


class DiscretizationError(FocError, ArithmeticError):
    """Raised when a continued-fraction discretization cannot be completed."""


class PivotBreakdown(DiscretizationError):
    pass


class InsufficientDepth(DiscretizationError):
    pass


class UnstableRealization(DiscretizationError):
    pass


class NonFiniteInput(FocError, ValueError):
    pass


class NyquistViolation(FocError, ValueError):
    pass


class DivergenceDetected(FocError, RuntimeError):
    pass


class LengthMismatch(FocError, ValueError):
    pass
