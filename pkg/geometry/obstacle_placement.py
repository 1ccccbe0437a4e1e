"""Random obstacle placement with bounded resampling."""

from typing import List, Optional

import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from geometry.tracked_space import DEFAULT_HALF_SIDE, Obstacle, Point, TrackedSpace
from utils import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_ATTEMPTS = 1000


class PlacementRejected(Exception):
    """A sampled obstacle covers the forbidden point."""


def _sample_obstacle(
    space: TrackedSpace,
    half_side: float,
    rng: np.random.Generator,
    forbidden: Optional[Point],
) -> Obstacle:
    limit_x = space.half_width - half_side
    limit_y = space.half_depth - half_side
    candidate = Obstacle((rng.uniform(-limit_x, limit_x), rng.uniform(-limit_y, limit_y)), half_side)
    if forbidden is not None and candidate.contains(forbidden, margin=space.safety_margin):
        raise PlacementRejected(f"Obstacle at {candidate.center} covers {forbidden}")
    return candidate


def reposition_obstacles(
    space: TrackedSpace,
    count: int,
    rng: np.random.Generator,
    forbidden: Optional[Point] = None,
    half_side: float = DEFAULT_HALF_SIDE,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> TrackedSpace:
    """Return a copy of ``space`` with ``count`` freshly sampled obstacles.

    Centers are uniform over the region that keeps each square fully inside the room;
    obstacles may overlap each other. A sample covering ``forbidden`` (the agent's physical
    position) is redrawn, at most ``max_attempts`` times, after which that obstacle is
    dropped for this epoch.
    """
    if count < 0:
        raise ValueError(f"Obstacle count must be >= 0, got {count}")
    if half_side > min(space.half_width, space.half_depth):
        raise ValueError(f"Obstacle half_side {half_side} does not fit inside the room")

    placed: List[Obstacle] = []
    for index in range(count):
        try:
            for attempt in Retrying(
                stop=stop_after_attempt(max_attempts),
                retry=retry_if_exception_type(PlacementRejected),
            ):
                with attempt:
                    obstacle = _sample_obstacle(space, half_side, rng, forbidden)
            placed.append(obstacle)
            logger.debug(f"Obstacle {index} placed at ({obstacle.center[0]:.3f}, {obstacle.center[1]:.3f})")
        except RetryError:
            logger.warning(
                f"Obstacle {index} dropped after {max_attempts} rejected placements around {forbidden}"
            )

    return space.with_obstacles(placed)
