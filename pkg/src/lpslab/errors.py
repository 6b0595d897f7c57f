"""Exception hierarchy.

Every error raised by the library derives from :class:`LpsLabError`, which is
itself a :class:`ValueError` so that callers treating bad input generically
keep working.
"""


class LpsLabError(ValueError):
    """Base class for all library errors."""


class NumericalFailure(LpsLabError):
    """A computation failed for numerical reasons (CLI exit code 3)."""


# grid
class InvalidDim(LpsLabError):
    pass


class NonPositiveR(LpsLabError):
    pass


class TooFewNodes(LpsLabError):
    pass


class GridMismatch(LpsLabError):
    pass


class InvalidExponent(LpsLabError):
    pass


class IndexOutOfRange(LpsLabError, IndexError):
    pass


# spectral
class NegativePotential(LpsLabError):
    pass


class EigFailure(NumericalFailure):
    pass


class ZeroMode(NumericalFailure):
    pass


class TooLarge(LpsLabError):
    pass


class NonFiniteFn(NumericalFailure):
    pass


class BadQuadOrder(LpsLabError):
    pass


# square functions
class BadInterval(LpsLabError):
    pass


# inequality checks
class NegativeInput(LpsLabError):
    pass


class NonPositiveField(NumericalFailure):
    pass


class SolveFailure(NumericalFailure):
    pass


class TimeTooSmall(LpsLabError):
    pass


class ExponentOutOfRange(LpsLabError):
    pass


# experiments
class BadParams(LpsLabError):
    pass


class ZeroInput(LpsLabError):
    pass


# configuration / reporting
class ConfigError(LpsLabError):
    """Configuration problem tied to one field (CLI exit code 2)."""

    def __init__(self, field, message=""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class MissingFile(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class RangeError(ConfigError):
    pass


class IoError(LpsLabError, OSError):
    pass
