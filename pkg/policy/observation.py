"""Observation vector fed to the policy network."""

import math
from typing import Optional

import numpy as np

from controllers.translation import alpha_center
from geometry import DEFAULT_NUM_RAYS, DEFAULT_RAY_SPACING_DEG, TrackedSpace, sense_surroundings
from locomotion import UserState

# x, y, angle to center, rays..., previous action
OBSERVATION_SIZE = 3 + DEFAULT_NUM_RAYS + 1


def observation_size(num_rays: int = DEFAULT_NUM_RAYS) -> int:
    return 3 + num_rays + 1


def encode_observation(
    state: UserState,
    space: TrackedSpace,
    prev_action: float,
    rays: Optional[np.ndarray] = None,
    num_rays: int = DEFAULT_NUM_RAYS,
    spacing_deg: float = DEFAULT_RAY_SPACING_DEG,
) -> np.ndarray:
    """Normalized position, heading error to the room center, ray distances and previous action.

    ``rays`` may be passed in when the caller already sensed the surroundings at this pose.
    """
    physical = state.physical
    if rays is None:
        rays = sense_surroundings(physical, space, num_rays, spacing_deg)

    obs = np.empty(observation_size(len(rays)), dtype=float)
    obs[0] = physical.x / space.half_width
    obs[1] = physical.y / space.half_depth
    obs[2] = alpha_center(physical, space) / math.pi
    obs[3:-1] = np.minimum(np.asarray(rays, dtype=float) / space.diagonal, 1.0)
    obs[-1] = min(1.0, max(-1.0, float(prev_action)))
    return obs
