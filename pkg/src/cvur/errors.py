"""Exception types raised across the package."""


class CvurError(ValueError):
    """Base class for all domain errors."""


class InvalidDimensionsError(CvurError):
    pass


class NotHermitianError(CvurError):
    pass


class NotPSDError(CvurError):
    pass


class BadTraceError(CvurError):
    pass


class NotUnitaryError(CvurError):
    pass


class NotHermitianUnitaryError(CvurError):
    pass


class DegenerateConditioningError(CvurError):
    """Bob's marginal is pure along the measured axis while the correlator is not zero."""


class MixedStateError(CvurError):
    """A pure-state-only quantity was requested on a mixed state."""


class InternalInconsistencyError(CvurError):
    """Two independent evaluations of the same quantity disagree."""


class InvalidRankError(CvurError):
    pass


class SchemaMismatchError(CvurError):
    pass


class InvariantBreachError(CvurError):
    """An experiment produced a row that violates one of its invariants."""
