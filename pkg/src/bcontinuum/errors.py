"""Exception hierarchy shared by every backend."""


class BContinuumError(Exception):
    """Base class for all errors raised by the engine."""


class DomainError(BContinuumError, ValueError):
    """An operation was applied outside its mathematical domain."""

    def __init__(self, message, *, function=None, argument=None):
        super().__init__(message)
        self.function = function
        self.argument = argument


class NotRepresentable(BContinuumError):
    """The value exists but has no form in the current backend.

    Raised e.g. for ``sin`` of an infinite Levi-Civita element; callers are
    expected to fall back to the germ backend.
    """


class NonDifferentiable(BContinuumError):
    """The difference quotient has no standard part (or two different ones)."""


class UsageError(BContinuumError):
    """Bad arguments: wrong variable, probe outside the domain, and so on."""
