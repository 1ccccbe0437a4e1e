"""Angle and planar vector helpers shared by the simulation packages."""

import math
from typing import Tuple

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Renormalize ``angle`` into (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


def wrap_positive(angle: float) -> float:
    """Renormalize ``angle`` into [0, 2*pi)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def signed_angle(from_heading: float, to_heading: float) -> float:
    return wrap_angle(to_heading - from_heading)


def bearing(origin: Tuple[float, float], target: Tuple[float, float]) -> float:
    return math.atan2(target[1] - origin[1], target[0] - origin[0])


def degrees_of_turn(old_heading: float, new_heading: float) -> float:
    """Physical turn from ``old_heading`` to ``new_heading`` in degrees, within [0, 360)."""
    return math.degrees(wrap_positive(new_heading - old_heading))
