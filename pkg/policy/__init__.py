"""Policy package initialization."""

from .actions import UnknownSlotError, clamp_action, decode_action
from .environment import RedirectionEnv
from .observation import OBSERVATION_SIZE, encode_observation, observation_size
from .rewards import reward_terms, step_reward

__all__ = [
    "OBSERVATION_SIZE",
    "RedirectionEnv",
    "UnknownSlotError",
    "clamp_action",
    "decode_action",
    "encode_observation",
    "observation_size",
    "reward_terms",
    "step_reward",
]
