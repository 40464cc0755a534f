"""Exception types shared across the package."""


class DirsetError(Exception):
    """Base class for all errors raised by this package."""


class CompositeCharacteristic(DirsetError):
    """The requested field characteristic is not a prime."""


class SizeLimit(DirsetError):
    """The requested field or table exceeds the in-memory size cap."""


class DivisionByZero(DirsetError, ZeroDivisionError):
    """Multiplicative inverse (or negative power) of zero."""


class NonDivisor(DirsetError):
    """Subgroup index d does not divide the group order q - 1 (or d is out of range)."""


class LengthMismatch(DirsetError):
    """A value table does not have exactly q entries."""


class InternalDisagreement(DirsetError):
    """Two independent computations of the same predicate disagree; arithmetic bug."""


class PreconditionViolated(DirsetError):
    """An operation was called outside its admissible inputs."""


class ZeroInR(DirsetError):
    """Ratio-stabilizer input set contains zero."""


class DegreeOutOfRange(DirsetError):
    """Criterion requires a reduced degree k with 0 < k < q."""


class ConstantFunction(DirsetError):
    """Criterion requires a non-constant function."""


class BudgetExceeded(DirsetError):
    """Enumeration family is larger than the configured budget."""


class InvalidSpec(DirsetError):
    """Campaign specification is malformed."""
