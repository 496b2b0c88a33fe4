"""Exception hierarchy shared by every module of the package."""


class HeraldError(Exception):
    """Base class for all errors raised by heraldqubit."""


class InvalidDimensionError(HeraldError, ValueError):
    """A Fock cutoff or mode count is too small to be meaningful."""


class OutOfRangeError(HeraldError, ValueError):
    """A Fock level or mode index lies outside the truncated space."""


class InvalidArgumentError(HeraldError, ValueError):
    pass


class IncompatibleStatesError(HeraldError, ValueError):
    """Operands live on differently truncated spaces."""


class TruncationError(HeraldError):
    """The Fock cutoff is too small for the requested accuracy.

    ``mass`` holds the probability that would have been lost, so callers can
    decide how far to raise the cutoff.
    """

    def __init__(self, message, mass=None):
        super().__init__(message)
        self.mass = mass


class NumericalInconsistencyError(HeraldError, ArithmeticError):
    pass


class ZeroProbabilityError(HeraldError, ArithmeticError):
    """Conditioning on an outcome whose probability is (numerically) zero."""

    def __init__(self, message, probability=None):
        super().__init__(message)
        self.probability = probability


class UndefinedTargetError(HeraldError, ValueError):
    """The ideal target qubit has a vanishing normalisation."""


class InfeasibleDesignError(HeraldError):
    """No admissible design point reaches the requested probability floor."""

    def __init__(self, message, max_probability):
        super().__init__(message)
        self.max_probability = max_probability
