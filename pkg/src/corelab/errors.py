"""Exception hierarchy shared by all corelab modules."""


class CorelabError(Exception):
    """Base class for corelab errors."""


class UsageError(CorelabError, ValueError):
    """Bad arguments: out-of-range indices, malformed instances, invalid outcomes."""


class ValidationError(UsageError):
    """Input data violates a structural requirement (e.g. a non-cubic graph)."""


class ResourceLimitError(CorelabError):
    """A configured node or branch cap was exceeded.

    ``partial`` carries whatever results were collected before the cap hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(CorelabError, AssertionError):
    """An internal invariant was breached; indicates a bug, not bad input."""


class ContractViolation(CorelabError):
    """A pluggable mechanism returned output that breaks its contract."""
