"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`FusionCensusError`, so callers (and the CLI) can map them to exit
codes without catching unrelated bugs.
"""


class FusionCensusError(Exception):
    pass


class DomainError(FusionCensusError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(FusionCensusError):
    """A configured enumeration cap would be exceeded."""


class NormalFormError(FusionCensusError):
    """The delta = 0 normal form does not exist (beta is not invertible)."""


class NumericError(FusionCensusError):
    pass


class UnsupportedError(FusionCensusError):
    pass


class SolveError(FusionCensusError):
    pass


class SingularityError(FusionCensusError):
    pass


class ConsistencyError(FusionCensusError):
    """An internal cross-check failed; this indicates a bug or a false claim."""
