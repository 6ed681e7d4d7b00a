"""Exceptions raised by splitq."""


class SplitqError(Exception):
    """Base exception for every error raised by the library."""


class DesignSpaceTooLargeError(SplitqError):
    """The number of patterns C(K, m) exceeds the configured cap."""


class InvalidDesignError(SplitqError):
    """A design distribution is not a probability vector over its patterns."""


class ParameterError(SplitqError):
    """Model parameters violate their invariants."""


class SingularPatternError(SplitqError):
    """The covariance restricted to a pattern is singular."""


class UndefinedCriterionError(SplitqError):
    """The information matrix of a design is singular."""


class UncoveredItemError(UndefinedCriterionError):
    """Some question item is never administered by the design."""

    def __init__(self, item: int):
        """Create the error for the given 0-based item index."""
        super().__init__(f"criterion undefined: item {item} uncovered")
        self.item = item


class EstimationError(SplitqError):
    """An estimator failed on the given data."""


class DataFormatError(SplitqError):
    """Input files could not be parsed."""


class StudyAbortedError(SplitqError):
    """Too many Monte-Carlo replicates failed."""
