"""Exception hierarchy shared by all survmap modules."""

from __future__ import annotations


class SurvmapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SurvmapError, ValueError):
    """An argument violates an operation's precondition."""


class NoPathError(DomainError):
    """Two physical nodes are not connected."""


class CapacityError(SurvmapError):
    """An enumeration or model would exceed its configured budget."""


class NumericRangeError(SurvmapError, ArithmeticError):
    """A cost computation left the finite floating-point range."""


class GenerationError(SurvmapError):
    """A randomized generator gave up before meeting its targets.

    Attributes:
        blocking_property: name of the property that rejected most attempts.
    """

    def __init__(self, message: str, blocking_property: str | None = None):
        super().__init__(message)
        self.blocking_property = blocking_property


class InstanceFormatError(SurvmapError, ValueError):
    """An instance file is malformed or violates a network invariant."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class AugmentationError(SurvmapError):
    """No logical link could be added that avoids the failure scenario."""


class ModelError(SurvmapError):
    """Internal inconsistency while assembling an optimization model."""


class IngestionError(SurvmapError):
    """A solver solution does not describe valid routes."""


class SolutionFormatError(IngestionError):
    """A solution file is unreadable or lacks required variables."""


class StageError(SurvmapError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the original error."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage
