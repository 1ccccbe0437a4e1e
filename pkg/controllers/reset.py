"""Reset heuristics: 2:1-Turn, Turn-to-Center and Turn-to-Furthest."""

import math

import numpy as np

from controllers.translation import CENTER_EPS
from geometry import Pose, TrackedSpace, cast_rays
from utils.angle_utils import bearing, wrap_angle

DEFAULT_T2F_RESOLUTION_DEG = 1.0
T2F_TIE_TOLERANCE = 1e-9


def two_one_turn(physical_pose: Pose) -> float:
    return wrap_angle(physical_pose.heading + math.pi)


def t2c(physical_pose: Pose, space: TrackedSpace) -> float:
    """Face the room center; at the exact center fall back to the 2:1-Turn."""
    cx, cy = space.center
    if math.hypot(cx - physical_pose.x, cy - physical_pose.y) < CENTER_EPS:
        return two_one_turn(physical_pose)
    return bearing(physical_pose.position, space.center)


def t2f_scan(
    physical_pose: Pose,
    space: TrackedSpace,
    resolution_deg: float = DEFAULT_T2F_RESOLUTION_DEG,
) -> tuple[np.ndarray, np.ndarray]:
    """Candidate directions on the absolute grid k * resolution and their free distances."""
    directions = np.radians(np.arange(0.0, 360.0, resolution_deg))
    return directions, cast_rays(physical_pose.position, directions, space)


def t2f(
    physical_pose: Pose,
    space: TrackedSpace,
    resolution_deg: float = DEFAULT_T2F_RESOLUTION_DEG,
) -> float:
    """Face the longest straight free route; ties go to the smallest turn from the current heading."""
    directions, distances = t2f_scan(physical_pose, space, resolution_deg)
    best = distances.max()
    candidates = directions[distances >= best - T2F_TIE_TOLERANCE]
    turns = np.abs((candidates - physical_pose.heading + math.pi) % (2.0 * math.pi) - math.pi)
    return wrap_angle(float(candidates[int(np.argmin(turns))]))
