"""Exception types shared across the package."""


class MeanKingError(Exception):
    """Base class for all package-specific errors."""


class NotOddPrime(MeanKingError):
    """Requested dimension is not an odd prime >= 3."""


class BasisOutOfRange(MeanKingError):
    """Basis index m outside 0..D."""


class ConstructionInconsistent(MeanKingError):
    """VAA basis failed its orthonormality guard.

    Signals a MUB / conjugation convention mismatch rather than a
    numerical accident.
    """


class PhaseCountMismatch(MeanKingError):
    """Phase vector length does not match the setup's phase slots."""


class DegenerateOutput(MeanKingError):
    """All output polynomial coefficients vanished (fully destructive
    interference); the click distribution is undefined."""


class EmptyPattern(MeanKingError):
    """A click pattern has zero likelihood under every VAA state."""


class NonFiniteLoss(MeanKingError):
    """The optimization objective returned NaN or infinity."""


class DimensionMismatch(MeanKingError):
    """Two objects with incompatible dimensions were combined."""


class EmptySubset(MeanKingError):
    """A basis subset passed to a report was empty."""
