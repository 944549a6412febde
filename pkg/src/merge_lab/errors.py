"""Exception types shared across the lab."""


class MergeLabError(Exception):
    """Base class for all lab-specific errors."""


class InconsistentKeyError(MergeLabError):
    """A constrained merge problem admits no consistent interleaving."""


class TerminalStateError(MergeLabError):
    """Operation requires a state with at least one undetermined outcome."""


class CoverageError(MergeLabError):
    """A table or solve cache does not cover the requested problem."""

    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing or []


class BudgetExceededError(MergeLabError):
    """A configured exploration budget was exhausted."""


class FormatError(MergeLabError):
    """A persisted artifact failed version or checksum validation."""


class NotSolvedError(MergeLabError):
    """Strategy extraction requested before the covering solve completed."""


class NoValidReplyError(MergeLabError):
    """A queried comparison admits no valid adversary split.

    Believed impossible for consistent, non-terminal problems; raised (never
    silently skipped) so a violation of that assumption surfaces loudly.
    """
