"""Exception hierarchy shared by every module."""


class DPathwidthError(Exception):
    """Base class for all errors raised by this package."""


class SizeError(DPathwidthError):
    """An instance exceeds a configured enumeration or solver cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class PreconditionError(DPathwidthError, ValueError):
    """An input violates the documented precondition of an operation."""


class NotCliquePreservingError(PreconditionError):
    """A clause clique lies in no part of a supposedly clique-preserving cover."""


class UnsupportedError(DPathwidthError):
    """The operation is not defined for this kind of input (e.g. non-monotone programs)."""


class PropertyViolation(DPathwidthError, AssertionError):
    """A proven inequality or structural property failed to hold: a bug canary."""
