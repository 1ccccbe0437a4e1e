"""Locomotion package initialization."""

from .motion import DEFAULT_VIRTUAL_STEP, advance, perform_reset, resets_per_km, turn
from .trajectory_log import TRAJECTORY_COLUMNS, TrajectoryLogger
from .user_state import (
    MAX_CURVATURE_GAIN,
    MAX_TRANSLATION_GAIN,
    MIN_TRANSLATION_GAIN,
    NEUTRAL_TRANSLATION_GAIN,
    CollisionEvent,
    GainRangeError,
    GainSet,
    UserState,
)

__all__ = [
    "DEFAULT_VIRTUAL_STEP",
    "MAX_CURVATURE_GAIN",
    "MAX_TRANSLATION_GAIN",
    "MIN_TRANSLATION_GAIN",
    "NEUTRAL_TRANSLATION_GAIN",
    "CollisionEvent",
    "GainRangeError",
    "GainSet",
    "TRAJECTORY_COLUMNS",
    "TrajectoryLogger",
    "UserState",
    "advance",
    "perform_reset",
    "resets_per_km",
    "turn",
]
