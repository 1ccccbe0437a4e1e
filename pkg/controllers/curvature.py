"""Steer-to-Center curvature heuristic."""

import math

from geometry import Pose, TrackedSpace
from utils.angle_utils import bearing, signed_angle

S2C_MAX_GAIN = 0.1333
S2C_SATURATION_ANGLE = math.pi / 4
S2C_DEAD_ZONE = 1.25


def s2c(
    physical_pose: Pose,
    space: TrackedSpace,
    max_gain: float = S2C_MAX_GAIN,
    saturation_angle: float = S2C_SATURATION_ANGLE,
    dead_zone: float = S2C_DEAD_ZONE,
) -> float:
    """Curvature that turns the user toward the room center.

    Linear in the heading error up to ``saturation_angle``, then saturated at ``max_gain``;
    zero inside the ``dead_zone`` radius around the center.
    """
    cx, cy = space.center
    if math.hypot(cx - physical_pose.x, cy - physical_pose.y) < dead_zone:
        return 0.0

    theta_err = signed_angle(physical_pose.heading, bearing(physical_pose.position, space.center))
    if theta_err == 0.0:
        return 0.0
    return math.copysign(max_gain * min(1.0, abs(theta_err) / saturation_angle), theta_err)
