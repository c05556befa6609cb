"""Exception types shared across the package."""


class LegifieldError(Exception):
    """Base class for all package errors."""


class ParseError(LegifieldError):
    """A scene or trajectory file is structurally malformed."""


class ValidationError(LegifieldError):
    """Inputs violate a documented invariant (geometry, bounds, config)."""


class PlacementError(LegifieldError):
    """Rejection sampling could not place all objects."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class DegenerateSceneError(LegifieldError):
    """Too few objects to estimate a distribution."""


class UnknownTargetError(LegifieldError):
    """Requested target id does not exist in the scene."""


class SingularityError(LegifieldError):
    """Field evaluated at a point inside (or touching) an obstacle."""


class LocalMinimumError(LegifieldError):
    """Gradient descent stalled away from the target.

    Carries the partial (already smoothed) trajectory so callers can still
    write it out, plus the stall position.
    """

    def __init__(self, message: str, partial_trajectory=None, stall_position=None):
        super().__init__(message)
        self.partial_trajectory = partial_trajectory
        self.stall_position = stall_position


class TooFewWaypointsError(LegifieldError):
    """Trajectory has fewer waypoints than requested sections."""


class TargetUnrankedError(LegifieldError):
    """The target object did not appear in a ranked guess list."""

    def __init__(self, message: str, ranked_ids=()):
        super().__init__(message)
        self.ranked_ids = tuple(ranked_ids)
