"""Exception hierarchy shared by every module of the package."""


class MaxCurvesError(Exception):
    """Base class for all errors raised by this package."""


class NonPrime(MaxCurvesError, ValueError):
    pass


class EvenOrSmallN(MaxCurvesError, ValueError):
    pass


class FieldTooLarge(MaxCurvesError, ValueError):
    pass


class DivisionByZero(MaxCurvesError, ZeroDivisionError):
    pass


class BadSubfieldOrder(MaxCurvesError, ValueError):
    pass


class NotInQuadraticSubfield(MaxCurvesError, ValueError):
    pass


class BadExponent(MaxCurvesError, ValueError):
    pass


class BadOrder(MaxCurvesError, ValueError):
    pass


class BudgetExceeded(MaxCurvesError, RuntimeError):
    pass


class InvalidEdge(MaxCurvesError, ValueError):
    pass


class PointNotOnCurve(MaxCurvesError, ValueError):
    pass


class InfinityInput(MaxCurvesError, ValueError):
    pass


class HypothesisViolated(MaxCurvesError, ValueError):
    pass


class UnknownCover(MaxCurvesError, KeyError):
    pass


class IncompatibleSubgroup(MaxCurvesError, ValueError):
    pass


class PrecisionTooLow(MaxCurvesError, ValueError):
    pass


class GenusTooSmall(MaxCurvesError, ValueError):
    pass
