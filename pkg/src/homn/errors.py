"""Exception types shared across the package."""


class HomnError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(HomnError):
    """A binary container (IDX, CIFAR batch, dataset artifact) is malformed."""


class TruncationError(FormatError):
    """A binary container ends before its declared payload."""


class ShapeError(HomnError):
    """Array dimensions are incompatible with the requested operation."""


class EmptyClassError(HomnError):
    """A requested class label is absent from the dataset."""


class ZeroFieldError(HomnError):
    """An all-black image cannot be normalized into a field."""


class DegenerateProbeError(HomnError):
    """The probe amplitude grid has (or would reach) zero norm."""


class InvalidOverlapError(HomnError):
    """An overlap value is outside the physically allowed range."""
