"""Exception hierarchy for ThetaBench.

Every failure mode that a computation can signal has its own class, so suite
runners can decide which ones become a ``skipped-unsupported`` result and which
ones abort the run.
"""

from __future__ import annotations


class ThetaBenchError(Exception):
    """Base class of all ThetaBench errors."""


class BudgetExceeded(ThetaBenchError):
    """A group or operator is larger than the configured enumeration budget."""

    def __init__(self, what: str, size: int, budget: int) -> None:
        super().__init__(f"{what} has size {size}, exceeding the budget of {budget}")
        self.what = what
        self.size = size
        self.budget = budget


class UnsupportedFamily(ThetaBenchError):
    """The group family or descriptor is not implemented."""


class NotSymplectic(ThetaBenchError):
    """A matrix does not preserve the standard symplectic form."""


class DegenerateSum(ThetaBenchError):
    """A quadratic Gauss sum was requested for a = 0."""


class GroupMismatch(ThetaBenchError):
    """Two class functions live on different groups."""


class LeviMismatch(ThetaBenchError):
    """A class function does not live on the Levi factor of the given parabolic."""


class UnsupportedScale(ThetaBenchError):
    """A Deligne-Lusztig request needs Green-function data that is not available."""


class NonIntegerMultiplicity(ThetaBenchError):
    """A decomposition produced a multiplicity that is not a nonnegative integer."""


class BoundExhausted(ThetaBenchError):
    """A tower search hit its level bound without finding an occurrence."""

    def __init__(self, what: str, bound: int) -> None:
        super().__init__(f"{what}: no occurrence up to level bound {bound}")
        self.bound = bound


class UnknownSuite(ThetaBenchError):
    """The requested verification suite id is not registered."""


class NoSuitableLiftPrime(ThetaBenchError):
    """No prime l = 1 mod exponent(G) was found within the search bound."""


class BasisDegenerate(ThetaBenchError):
    """The class functions given as a projection basis are linearly dependent."""


class ElementNotInGroup(ThetaBenchError):
    """A matrix is not an element of the enumerated group."""


class NotSpecialOrthogonal(ThetaBenchError):
    """A matrix is not in the special orthogonal group of the stored form."""


class IncompatibleKinds(ThetaBenchError):
    """Two formed spaces cannot be paired into a dual pair of the requested type."""


class DescriptorNotALevi(ThetaBenchError):
    """A Levi descriptor does not describe a standard Levi subgroup."""


class NotASubgroup(ThetaBenchError):
    """Member positions do not describe a subgroup of the given group."""


class DimensionMismatch(ThetaBenchError):
    """Two Weil operators act on spaces of different dimension."""


class LevelBudgetExceeded(ThetaBenchError):
    """A tower level is beyond the configured level bound."""


class CacheFormatError(ThetaBenchError):
    """A cache or report file is unreadable, corrupt or from another format version."""
