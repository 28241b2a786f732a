"""Domain error types shared across the package."""


class MobnucError(ValueError):
    """Base class for all domain errors raised by this package."""


class NotCompactInclusion(MobnucError):
    """The inner interval is not compactly contained in the outer one."""


class NonPositiveParameter(MobnucError):
    """A parameter that must be strictly positive was not."""


class ParameterOutOfRange(MobnucError):
    """A parameter lies outside its admissible open range."""


class ParameterAtSingularity(MobnucError):
    """A parameter sits on (or numerically too close to) a singular point."""


class BadWeight(MobnucError):
    """Lowest weight must be strictly positive."""


class TooSmall(MobnucError):
    """Truncation dimension below the minimum needed for a meaningful check."""


class SingularH(MobnucError):
    """The regularized inverse of the translation generator failed its
    conditioning check."""


class DivergentSpectrum(MobnucError):
    """Multiplicities grow too fast for the partition series to converge."""


class InsufficientGrid(MobnucError):
    """Too few grid points for the requested fit."""


class EvenDimensionUnsupported(MobnucError):
    """Even spatial dimension: the branching combinatorics implemented here
    cover odd dimensions (and the degenerate d = 1 case) only."""


class RadiusNotGreaterThanOne(MobnucError):
    """Double-cone radius must exceed the reference radius 1."""


class BadDimension(MobnucError):
    """Spatial dimension must be a positive integer."""
