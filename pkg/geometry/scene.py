"""Build tracked spaces from the ``scene`` configuration section."""

from typing import Optional

import numpy as np

from config import SceneConfig
from geometry.obstacle_placement import reposition_obstacles
from geometry.tracked_space import Obstacle, Point, TrackedSpace
from utils import get_logger

logger = get_logger(__name__)


def build_tracked_space(scene: SceneConfig) -> TrackedSpace:
    """Empty room (or the fixed obstacle list, when one is configured)."""
    obstacles = tuple(Obstacle(tuple(center), scene.obstacle_half_side) for center in scene.obstacles)
    space = TrackedSpace(
        half_width=scene.half_width,
        half_depth=scene.half_depth,
        obstacles=obstacles,
        safety_margin=scene.safety_margin,
    )
    logger.debug(
        f"Tracked space {2 * scene.half_width:g} x {2 * scene.half_depth:g} m, "
        f"{len(obstacles)} fixed obstacles"
    )
    return space


def uses_random_obstacles(scene: SceneConfig) -> bool:
    return not scene.obstacles and scene.obstacle_count > 0


def refresh_obstacles(
    space: TrackedSpace,
    scene: SceneConfig,
    rng: np.random.Generator,
    forbidden: Optional[Point],
) -> TrackedSpace:
    """New epoch layout: fixed scenes are returned unchanged, random scenes are resampled."""
    if not uses_random_obstacles(scene):
        return space
    return reposition_obstacles(
        space,
        scene.obstacle_count,
        rng,
        forbidden=forbidden,
        half_side=scene.obstacle_half_side,
        max_attempts=scene.max_placement_attempts,
    )
