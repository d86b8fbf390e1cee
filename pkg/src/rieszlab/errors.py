"""Exception hierarchy shared by all rieszlab modules."""


class RieszLabError(ValueError):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(RieszLabError):
    pass


class SingularBasis(RieszLabError):
    pass


class NotPositive(RieszLabError):
    pass


class SpaceMismatch(RieszLabError):
    pass


class UnsupportedCone(RieszLabError):
    pass


class BadExponent(RieszLabError):
    pass


class MalformedProgram(RieszLabError):
    pass


class NotInRange(RieszLabError):
    pass


class HypothesisViolated(RieszLabError):
    """A named hypothesis of an order-theoretic check failed.

    ``which`` is a short machine-readable code, e.g. ``"meet"`` when the
    operator meet that was required to vanish does not.
    """

    def __init__(self, which, message=None):
        self.which = which
        super().__init__(message or f"hypothesis violated: {which}")


class PreconditionFailed(RieszLabError):
    """Like HypothesisViolated, for report-producing analyses."""

    def __init__(self, which, message=None):
        self.which = which
        super().__init__(message or f"precondition failed: {which}")


class ZeroProjection(RieszLabError):
    pass


class TheoremViolation(RieszLabError):
    """An exact check that a proved statement guarantees came out false.

    Raised on states the theory rules out; reaching it means a bug in this
    package or a genuine counterexample, and either must fail the run.
    """


class InvalidAlgebra(RieszLabError):
    pass


class NotIdempotent(RieszLabError):
    pass


class NotAPermutation(RieszLabError):
    pass


class GroupTooLarge(RieszLabError):
    pass


class BadPartition(RieszLabError):
    pass


class NotContractive(RieszLabError):
    pass


class DiagonalNotConstant(RieszLabError):
    pass


class ZeroDiagonal(RieszLabError):
    pass


class BadFamily(RieszLabError):
    pass


class CapExceeded(RieszLabError):
    pass


class NeedTwoBlocks(RieszLabError):
    pass


class BadAlpha(RieszLabError):
    pass


class BetaOutOfRange(RieszLabError):
    pass
