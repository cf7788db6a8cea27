"""Exception hierarchy shared by all modules."""


class TailRatioError(Exception):
    """Base class for every error raised by :mod:`tailratio`."""


class DomainError(TailRatioError, ValueError):
    """Argument outside the mathematical domain of a function."""


class EmptySample(TailRatioError, ValueError):
    pass


class NonPositiveEntry(TailRatioError, ValueError):
    pass


class NonFiniteEntry(TailRatioError, ValueError):
    pass


class IndexOutOfRange(TailRatioError, IndexError):
    pass


class IncompatibleSampleSize(TailRatioError, ValueError):
    """Sample size is not of the form ``(s + 1) * k - 1``."""


class InsufficientSample(TailRatioError, ValueError):
    pass


class DegenerateRatio(TailRatioError, ArithmeticError):
    """The statistic is undefined because two order statistics coincide
    (or an equivalent zero denominator occurred)."""


class DensityVanishes(TailRatioError, ValueError):
    """The density at a required quantile is zero or infinite."""


class ConvergenceError(TailRatioError, RuntimeError):
    pass
