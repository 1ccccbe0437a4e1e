"""Tracked-space world model: room boundary, square obstacles and planar poses."""

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Tuple

import numpy as np

from utils.angle_utils import wrap_angle

Point = Tuple[float, float]

DEFAULT_HALF_WIDTH = 7.5
DEFAULT_HALF_DEPTH = 7.5
DEFAULT_HALF_SIDE = 1.25

# Containment slack for obstacles placed flush against a wall
_EPS = 1e-9


class InvalidQueryError(ValueError):
    """Raised when a sensing query originates outside free space."""


@dataclass(frozen=True, slots=True)
class Pose:
    """Planar position plus heading (radians, counterclockwise from +x, kept in (-pi, pi])."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    @property
    def position(self) -> Point:
        return self.x, self.y

    def with_heading(self, heading: float) -> "Pose":
        return Pose(self.x, self.y, heading)

    def moved(self, distance: float, heading: float | None = None) -> "Pose":
        """Translate ``distance`` along ``heading`` (default: own heading), keeping the heading."""
        direction = self.heading if heading is None else heading
        return Pose(
            self.x + distance * math.cos(direction),
            self.y + distance * math.sin(direction),
            self.heading,
        )


@dataclass(frozen=True, slots=True)
class Obstacle:
    """Axis-aligned square footprint of a cube obstacle."""

    center: Point
    half_side: float = DEFAULT_HALF_SIDE

    def __post_init__(self) -> None:
        if not self.half_side > 0:
            raise ValueError(f"Obstacle half_side must be positive, got {self.half_side}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def bounds(self, margin: float = 0.0) -> Tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax), inflated by ``margin``."""
        cx, cy = self.center
        h = self.half_side + margin
        return cx - h, cx + h, cy - h, cy + h

    def contains(self, point: Point, margin: float = 0.0) -> bool:
        """True when ``point`` lies in the closed (inflated) square."""
        xmin, xmax, ymin, ymax = self.bounds(margin)
        return xmin <= point[0] <= xmax and ymin <= point[1] <= ymax


@dataclass(frozen=True, slots=True)
class TrackedSpace:
    """Rectangular room centered at the origin with square obstacles fully inside it.

    Immutable: repositioning obstacles yields a new value, so one instance can be
    read by many environments at once.
    """

    half_width: float = DEFAULT_HALF_WIDTH
    half_depth: float = DEFAULT_HALF_DEPTH
    obstacles: Tuple[Obstacle, ...] = ()
    safety_margin: float = 0.0
    # Obstacle bounds as arrays (xmin, xmax, ymin, ymax) for vectorized ray casting
    obstacle_arrays: Tuple[np.ndarray, ...] = field(
        init=False, repr=False, compare=False, default=()
    )
    # Margin-inflated bounds for collision queries
    collision_bounds: Tuple[Tuple[float, float, float, float], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        if not self.half_width > 0 or not self.half_depth > 0:
            raise ValueError(
                f"Room half extents must be positive, got {self.half_width} x {self.half_depth}"
            )
        if self.safety_margin < 0:
            raise ValueError(f"safety_margin must be >= 0, got {self.safety_margin}")

        obstacles = tuple(self.obstacles)
        for obstacle in obstacles:
            cx, cy = obstacle.center
            if (
                abs(cx) + obstacle.half_side > self.half_width + _EPS
                or abs(cy) + obstacle.half_side > self.half_depth + _EPS
            ):
                raise ValueError(f"Obstacle at {obstacle.center} is not fully inside the room")
        object.__setattr__(self, "obstacles", obstacles)

        raw = np.array([o.bounds() for o in obstacles], dtype=float).reshape(-1, 4)
        object.__setattr__(self, "obstacle_arrays", tuple(raw[:, i] for i in range(4)))
        object.__setattr__(
            self, "collision_bounds", tuple(o.bounds(self.safety_margin) for o in obstacles)
        )

    @property
    def diagonal(self) -> float:
        return math.hypot(2.0 * self.half_width, 2.0 * self.half_depth)

    @property
    def center(self) -> Point:
        return 0.0, 0.0

    def with_obstacles(self, obstacles: Iterable[Obstacle]) -> "TrackedSpace":
        return replace(self, obstacles=tuple(obstacles))

    def is_free(self, point: Point) -> bool:
        """Strictly inside the boundary and outside every closed obstacle square."""
        x, y = point
        if not (abs(x) < self.half_width and abs(y) < self.half_depth):
            return False
        return not any(o.contains(point) for o in self.obstacles)
