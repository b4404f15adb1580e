"""Exception hierarchy shared by every module."""


class ThlnError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ThlnError, ValueError):
    pass


class DimensionTooSmall(DimensionError):
    pass


class DimensionMismatch(DimensionError):
    pass


class EvenDimension(DimensionError):
    pass


class NotABijection(ThlnError, ValueError):
    pass


class FaultyQueryVertex(ThlnError, ValueError):
    pass


class EmptySurvivor(ThlnError, ValueError):
    pass


class OverlayConflict(ThlnError, ValueError):
    pass


class InvalidFaultSet(ThlnError, ValueError):
    """A fault element that does not exist in the host graph."""


class BudgetExceeded(ThlnError, ValueError):
    """More faulty elements than the n-2 tolerance allows."""


class InvalidLength(ThlnError, ValueError):
    pass


class WeakPairRequested(ThlnError, ValueError):
    pass


class EnumerationTooLarge(ThlnError, ValueError):
    pass


class NoPathFound(ThlnError, RuntimeError):
    """A search or construction failed where existence was guaranteed.

    Carries the full instance so the failure can be reproduced.
    """

    def __init__(self, message, *, instance=None):
        super().__init__(message)
        self.instance = instance or {}
