"""Shortest-path walking toward procedurally generated virtual targets."""

import math
from typing import Optional, Tuple

import numpy as np

from geometry import Point, Pose
from pathgen.methods import PathMethod, next_target
from utils import get_logger

logger = get_logger(__name__)

DEFAULT_TARGET_THRESHOLD = 0.1
# Distance at which the walker stands on its target
ARRIVAL_TOLERANCE = 1e-9


class TargetConsumed(Exception):
    """The walker is within the threshold of its target; a new target is needed."""


def walk_direction(
    virtual_pose: Pose, target: Point, threshold: float = DEFAULT_TARGET_THRESHOLD
) -> float:
    """Bearing from the virtual position to ``target`` (the open VE's shortest path is straight)."""
    dx = target[0] - virtual_pose.x
    dy = target[1] - virtual_pose.y
    if math.hypot(dx, dy) < threshold:
        raise TargetConsumed(f"Target {target} reached")
    return math.atan2(dy, dx)


class VirtualWalker:
    """Owns the current target and the path RNG stream of one simulated user."""

    def __init__(
        self,
        method: PathMethod,
        rng: np.random.Generator,
        step_length: float = 0.1,
        threshold: float = DEFAULT_TARGET_THRESHOLD,
    ):
        self.method = method
        self.rng = rng
        self.step_length = step_length
        self.threshold = threshold
        self.target: Optional[Point] = None
        self.targets_reached = 0

    def plan(self, virtual_pose: Pose) -> Tuple[float, float]:
        """Heading and length of the next virtual step.

        Within the threshold the walker first takes a truncated step that lands on the target.
        A target it stands on is replaced immediately, so the walk never pauses.
        """
        if self.target is None:
            self.target = next_target(self.method, virtual_pose, self.rng)

        try:
            heading = walk_direction(virtual_pose, self.target, self.threshold)
        except TargetConsumed:
            dx = self.target[0] - virtual_pose.x
            dy = self.target[1] - virtual_pose.y
            if math.hypot(dx, dy) > ARRIVAL_TOLERANCE:
                # Final partial step
                return math.atan2(dy, dx), min(self.step_length, math.hypot(dx, dy))
            self.targets_reached += 1
            self.target = next_target(self.method, virtual_pose, self.rng)
            logger.debug(f"Target {self.targets_reached} reached; next target {self.target}")
            heading = walk_direction(virtual_pose, self.target, self.threshold)

        remaining = math.hypot(self.target[0] - virtual_pose.x, self.target[1] - virtual_pose.y)
        return heading, min(self.step_length, remaining)
