"""Exception hierarchy shared by every module."""


class MaxClassError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class BadParameters(MaxClassError, ValueError):
    """Parameters outside the supported range (e.g. ``n > 2m - 2``)."""


class UnsupportedPrime(BadParameters):
    pass


class BadResidue(BadParameters):
    pass


class PrecisionMismatch(MaxClassError, ValueError):
    pass


class NotDivisible(MaxClassError, ArithmeticError):
    pass


class MembershipError(MaxClassError, ValueError):
    """A vector is not in the lattice it was asserted to belong to."""


class InvalidAlpha(BadParameters):
    """A commutator table is not alternating, bilinear and equivariant."""


class ModelInvalid(MaxClassError, RuntimeError):
    """An internal verification of the group model failed."""

    exit_code = 3


class WrongLevel(MaxClassError, ValueError):
    pass


class TooLarge(MaxClassError, ValueError):
    pass


class BudgetExceeded(MaxClassError, RuntimeError):
    pass


class WrongKind(MaxClassError, ValueError):
    pass


class HypothesisViolated(MaxClassError, ValueError):
    pass
