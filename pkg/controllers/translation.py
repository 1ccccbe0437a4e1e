"""Center-based translation gain heuristics."""

import math

from geometry import Pose, TrackedSpace
from utils.angle_utils import bearing, signed_angle

CTG_AWAY_GAIN = 1.26
CTG_TOWARD_GAIN = 1.0
ACTG_OFFSET = 1.06
ACTG_AMPLITUDE = 0.2

# Closer than this to the center, the direction to the center is undefined
CENTER_EPS = 1e-12


def ctg(physical_pose: Pose, space: TrackedSpace) -> float:
    """1.26 while walking away from the room center (v_center . v_targ < 0), else 1.0."""
    cx, cy = space.center
    dot = (cx - physical_pose.x) * math.cos(physical_pose.heading) + (
        cy - physical_pose.y
    ) * math.sin(physical_pose.heading)
    return CTG_AWAY_GAIN if dot < 0 else CTG_TOWARD_GAIN


def alpha_center(physical_pose: Pose, space: TrackedSpace) -> float:
    """Signed angle from the physical heading to the direction of the room center (0 at the center)."""
    cx, cy = space.center
    if math.hypot(cx - physical_pose.x, cy - physical_pose.y) < CENTER_EPS:
        return 0.0
    return signed_angle(physical_pose.heading, bearing(physical_pose.position, space.center))


def actg(physical_pose: Pose, space: TrackedSpace) -> float:
    """Smooth variant: g_T = 1.06 - 0.2 cos(alpha_center), neutral 1.06 at the exact center."""
    cx, cy = space.center
    if math.hypot(cx - physical_pose.x, cy - physical_pose.y) < CENTER_EPS:
        return ACTG_OFFSET
    return ACTG_OFFSET - ACTG_AMPLITUDE * math.cos(alpha_center(physical_pose, space))
