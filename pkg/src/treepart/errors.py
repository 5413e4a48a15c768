"""Exception types raised across the package."""


class TreePartError(Exception):
    """Base class for all package errors."""


class InvalidSpec(TreePartError, ValueError):
    pass


class NotASubdivision(TreePartError):
    pass


class PatternTooLarge(TreePartError):
    pass


class InvalidDecomposition(TreePartError):
    """A tree decomposition violates one of its defining conditions."""

    def __init__(self, condition: str, witness=None):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition}: {witness!r}")


class TooLarge(TreePartError):
    pass


class NoBalancedBag(TreePartError):
    pass


class UnsupportedBlock(TreePartError):
    pass


class ComponentTooLarge(TreePartError):
    pass


class OracleViolation(TreePartError):
    pass


class PackingBudgetExceeded(TreePartError):
    pass


class NotWeaklyOuterKPlanar(TreePartError):
    pass


class CoreTooLarge(TreePartError):
    pass


class DegreeBoundViolated(TreePartError):
    pass


class NonCliqueRemainder(TreePartError):
    pass


class ClassViolation(TreePartError):
    """Input graph is outside the class required by a construction."""
