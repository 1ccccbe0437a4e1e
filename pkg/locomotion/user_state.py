"""Simulated user state and redirection gains."""

import math
from dataclasses import dataclass, field

from geometry import Point, Pose
from utils.angle_utils import TWO_PI

MIN_TRANSLATION_GAIN = 0.86
MAX_TRANSLATION_GAIN = 1.26
NEUTRAL_TRANSLATION_GAIN = 1.0
MAX_CURVATURE_GAIN = 0.1333

# 1.06 + 0.2 is 1.2600000000000002 in binary floating point
GAIN_TOLERANCE = 1e-9


class GainRangeError(ValueError):
    """Raised when gains fall outside the imperceptible ranges."""


@dataclass(frozen=True, slots=True)
class GainSet:
    """Translation gain (virtual/physical distance), curvature gain (1/m) and pending reset turn.

    A positive curvature rotates the virtual scene clockwise around the user, which bends the
    user's physical path counterclockwise.
    """

    translation: float = NEUTRAL_TRANSLATION_GAIN
    curvature: float = 0.0
    reset_angle: float = 0.0

    def validate(self) -> "GainSet":
        if not (
            MIN_TRANSLATION_GAIN - GAIN_TOLERANCE
            <= self.translation
            <= MAX_TRANSLATION_GAIN + GAIN_TOLERANCE
        ):
            raise GainRangeError(
                f"Translation gain {self.translation} outside "
                f"[{MIN_TRANSLATION_GAIN}, {MAX_TRANSLATION_GAIN}]"
            )
        if abs(self.curvature) > MAX_CURVATURE_GAIN + GAIN_TOLERANCE:
            raise GainRangeError(
                f"Curvature gain {self.curvature} outside [-{MAX_CURVATURE_GAIN}, {MAX_CURVATURE_GAIN}]"
            )
        if not (0.0 <= self.reset_angle < TWO_PI) or math.isnan(self.reset_angle):
            raise GainRangeError(f"Reset angle {self.reset_angle} outside [0, 2*pi)")
        return self


@dataclass(frozen=True, slots=True)
class UserState:
    """Physical and virtual poses of one simulated user plus bookkeeping."""

    physical: Pose
    virtual: Pose
    distance_walked_virtual: float = 0.0
    distance_walked_physical: float = 0.0
    reset_count: int = 0
    last_gains: GainSet = field(default_factory=GainSet)

    def __post_init__(self) -> None:
        if self.reset_count < 0:
            raise ValueError(f"reset_count must be >= 0, got {self.reset_count}")


@dataclass(frozen=True, slots=True)
class CollisionEvent:
    """The requested physical step would leave free space; the state was not changed."""

    state: UserState
    gains: GainSet
    attempted_end: Point
