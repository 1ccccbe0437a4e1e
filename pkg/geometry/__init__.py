"""Geometry package initialization."""

from .obstacle_placement import PlacementRejected, reposition_obstacles
from .ray_casting import (
    DEFAULT_NUM_RAYS,
    DEFAULT_RAY_SPACING_DEG,
    cast_ray,
    cast_rays,
    collides,
    sense_surroundings,
)
from .scene import build_tracked_space, refresh_obstacles, uses_random_obstacles
from .tracked_space import InvalidQueryError, Obstacle, Point, Pose, TrackedSpace

__all__ = [
    "DEFAULT_NUM_RAYS",
    "DEFAULT_RAY_SPACING_DEG",
    "InvalidQueryError",
    "Obstacle",
    "PlacementRejected",
    "Point",
    "Pose",
    "TrackedSpace",
    "build_tracked_space",
    "cast_ray",
    "cast_rays",
    "collides",
    "refresh_obstacles",
    "reposition_obstacles",
    "sense_surroundings",
    "uses_random_obstacles",
]
