"""Virtual target sampling laws for the five path-generation methods."""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from geometry import Point, Pose


@dataclass(frozen=True, slots=True)
class PathMethod:
    """Distance law (uniform range or constant) and direction law (uniform range or discrete set).

    Directions are offsets relative to the user's current virtual heading.
    """

    name: str
    distance_range: Tuple[float, float]
    direction_range: Tuple[float, float] | None = None
    direction_set: Tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        low, high = self.distance_range
        if not 0 < low <= high:
            raise ValueError(f"{self.name}: distance law must be strictly positive, got {self.distance_range}")
        if (self.direction_range is None) == (self.direction_set is None):
            raise ValueError(f"{self.name}: exactly one direction law is required")

    def sample_distance(self, rng: np.random.Generator) -> float:
        low, high = self.distance_range
        if low == high:
            return low
        return float(rng.uniform(low, high))

    def sample_direction(self, rng: np.random.Generator) -> float:
        if self.direction_set is not None:
            return self.direction_set[int(rng.integers(len(self.direction_set)))]
        low, high = self.direction_range
        return float(rng.uniform(low, high))


OFFICE_BUILDING = PathMethod("OfficeBuilding", (2.0, 8.0), direction_set=(-math.pi / 2, math.pi / 2))
EXPLORATION_SMALL = PathMethod("ExplorationSmall", (2.0, 6.0), direction_range=(-math.pi, math.pi))
EXPLORATION_LARGE = PathMethod("ExplorationLarge", (8.0, 12.0), direction_range=(-math.pi, math.pi))
LONG_WALK = PathMethod("LongWalk", (1000.0, 1000.0), direction_range=(-math.pi, math.pi))
RANDOM = PathMethod("Random", (2.0, 12.0), direction_range=(-math.pi, math.pi))

PATH_METHODS: Dict[str, PathMethod] = {
    "office": OFFICE_BUILDING,
    "exp_small": EXPLORATION_SMALL,
    "exp_large": EXPLORATION_LARGE,
    "long_walk": LONG_WALK,
    "random": RANDOM,
}


def get_path_method(key: str) -> PathMethod:
    try:
        return PATH_METHODS[key.lower()]
    except KeyError:
        raise ValueError(
            f"Unsupported path method: {key} (expected one of {', '.join(PATH_METHODS)})"
        ) from None


def next_target(method: PathMethod, virtual_pose: Pose, rng: np.random.Generator) -> Point:
    """Sample the next virtual target relative to the current position and heading."""
    distance = method.sample_distance(rng)
    direction = virtual_pose.heading + method.sample_direction(rng)
    return (
        virtual_pose.x + distance * math.cos(direction),
        virtual_pose.y + distance * math.sin(direction),
    )
