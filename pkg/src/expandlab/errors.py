"""Exception hierarchy.

Everything raised on purpose by this package derives from ExpandlabError so
callers (and the CLI) can distinguish our failures from genuine bugs.
"""


class ExpandlabError(Exception):
    """Base class for all expandlab errors."""


class ShapeError(ExpandlabError):
    """Inconsistent or unsupported array shapes."""


class FieldError(ExpandlabError):
    """Field mismatch, or an operation that the field does not support."""


class ZeroSubspaceError(ExpandlabError):
    """The zero subspace was passed where a nonzero one is required."""


class DimensionError(ExpandlabError):
    """A subspace dimension outside the range an operation accepts."""


class RegularityError(ExpandlabError):
    """A graph operation that needs regularity got an irregular graph."""


class SizeLimitError(ExpandlabError):
    """An enumeration or dense construction would exceed its size cap."""


class UnsupportedError(ExpandlabError):
    """A well-formed request this implementation deliberately refuses."""


class ValidationError(ExpandlabError):
    """An input failed a mathematical precondition (unitarity etc.)."""


class ConfigError(ExpandlabError):
    """Bad configuration: flags, environment variables, parameters."""


class SamplingError(ExpandlabError):
    """A rejection sampler ran out of attempts."""


class InternalError(ExpandlabError):
    """An invariant the code relies on failed; indicates a bug."""
