"""Exception types shared across the package."""


class QwaveError(Exception):
    """Base class for errors raised by this package."""


class ResourceLimitError(QwaveError):
    """Requested state size is outside the supported qubit range."""


class ShapeError(QwaveError, ValueError):
    """Array length or dimensionality does not match what the operation needs."""


class NormalizationError(QwaveError, ValueError):
    """A value to encode has magnitude above 1, or a signal violates its bound."""


class DomainError(QwaveError, ValueError):
    """Input samples fall outside the domain a mode assumes (e.g. negatives)."""


class StateError(QwaveError, ValueError):
    """Statevector is not in the condition an operation requires (e.g. not unit norm)."""


class FormatError(QwaveError, ValueError):
    """File container or sample format is not supported."""
