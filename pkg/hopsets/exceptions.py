"""
Custom exceptions for the hopsets package.
"""

from typing import Any, Dict, Optional


class HopsetError(Exception):
    """Base exception for hopsets package errors."""
    pass


class GraphError(HopsetError):
    """Raised when a graph violates its structural invariants."""
    pass


class GraphFormatError(GraphError):
    """
    Raised when an edge-list file cannot be parsed.

    ``line_number`` is 1-based and points at the offending line, or is
    ``None`` when the problem is with the file as a whole (a missing header,
    an edge count that disagrees with it).
    """

    def __init__(self, message: str = "", line_number: Optional[int] = None):
        super().__init__(message)
        self.line_number = line_number


class DisconnectedGraph(GraphError):
    """Raised when an operation needs a connected graph and did not get one."""
    pass


class ConfigurationError(HopsetError):
    """Raised when there's a configuration error."""
    pass


class Unhittable(HopsetError):
    """Raised when a hitting set is requested for a collection holding an empty set."""
    pass


class IdWidthExceeded(HopsetError):
    """Raised when a node ID does not fit in the bit width of a ruling-set run."""
    pass


class NonIntegralRange(HopsetError):
    """Raised when a cluster range is finite but not an integer."""
    pass


class PreconditionViolated(HopsetError):
    """
    Raised when a construction is asked for a guarantee its inputs cannot give.

    The hop reduction raises this when none of its hop-bound claims applies
    to the given ``h``. Passing ``force=True`` builds the edges anyway; the
    result then carries no certified hop bound.
    """
    pass


class WrongModel(HopsetError):
    """Raised when a ledger operation does not exist in the ledger's cost model."""
    pass


class NonRewindableStream(HopsetError):
    """Raised when a second pass is requested over a single-pass edge stream."""
    pass


class PropertyViolated(HopsetError):
    """
    Raised or reported when a checked invariant does not hold.

    ``details`` carries whatever the checker knew at the time (the pair, the
    two sides of the inequality, the parameters), so a report can be written
    without re-running anything.
    """

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = dict(details or {})


class RulingSetViolation(PropertyViolated):
    """Raised when a ruling set fails its separation or coverage invariant."""
    pass


class VerificationFailed(HopsetError):
    """Raised by verify runs that found violations; ``report`` is the full report."""

    def __init__(self, message: str = "", report: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.report = dict(report or {})
