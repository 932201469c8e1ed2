"""Exception hierarchy shared across the package."""


class ThreshnetError(Exception):
    """Base class for all errors raised by threshnet."""


class DomainError(ThreshnetError):
    """A parameter is outside the domain a formula or sampler is defined on."""


class DimensionError(DomainError):
    """Invalid or mismatched ambient dimension."""


class FeasibilityError(DomainError):
    """A calibration target cannot be reached by any threshold.

    Any edge-growth target must stay strictly between 0 and n(n-1)/4,
    since the edge probability ranges over (0, 1/2].
    """


class UnsupportedAnalyticsError(ThreshnetError):
    """The closed forms do not cover this configuration (e.g. even-power links)."""


class NumericError(ThreshnetError):
    """A numeric routine failed to reach its tolerance."""


class FitDegenerateError(ThreshnetError):
    """The sample admits no meaningful power-law fit."""


class ResourceLimitError(ThreshnetError):
    """A configured resource guard (e.g. max edge count) was exceeded."""


class SeriesFormatError(ThreshnetError):
    """An ingested data series failed to parse or validate."""
