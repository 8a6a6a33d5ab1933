"""Exception types shared across the package."""


class BsnError(Exception):
    """Base class for all bsnkit errors."""


class TooShortError(BsnError):
    """Trajectory has fewer than two usable snapshots."""


class NonFiniteError(BsnError):
    """A snapshot field is NaN or infinite."""


class EmptyInputError(BsnError):
    """An operation that needs a non-empty collection received none."""


class OutOfRangeError(BsnError):
    """Requested time lies outside the observed span."""


class InsufficientEventsError(BsnError):
    """Not enough events to estimate an inter-event rate."""


class TooFewPointsError(BsnError):
    """Not enough data points for the requested fit or clustering."""


class RankDeficientError(BsnError):
    """Design matrix is rank deficient (all sample times identical)."""


class EmptyClusterError(BsnError):
    """Cluster-level aggregation invoked on an empty cluster."""


class NoPositivePostsError(BsnError):
    """Square-root law fit needs at least one pooled point with positive posts."""


class MismatchedUniverseError(BsnError):
    """Two labelings or clusterings do not cover the same user set."""


class InvalidMixError(BsnError):
    """Population mix fractions are invalid (negative or do not sum to 1)."""


class SnapshotParseError(BsnError):
    """A snapshot file row failed to parse; carries the 1-based line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateRowError(SnapshotParseError):
    """Two rows share the same (user_id, day)."""


class SourceUnavailableError(BsnError):
    """A fetch failed even after the retry schedule was exhausted."""


class MissingAnalysisError(BsnError):
    """Comparison was requested before the analysis outputs exist."""
