"""Per-step reward of the redirection environment.

Every term is a penalty (at most zero): gain magnitude and gain change for the RL-controlled
gain slot, a fixed penalty per reset, and a proximity term from the sensing rays.
"""

from typing import Dict, Iterable, Optional

import numpy as np

from config import RewardConfig
from locomotion import GainSet, MAX_CURVATURE_GAIN, MAX_TRANSLATION_GAIN, NEUTRAL_TRANSLATION_GAIN

TRANSLATION_RANGE = MAX_TRANSLATION_GAIN - NEUTRAL_TRANSLATION_GAIN
CURVATURE_RANGE = MAX_CURVATURE_GAIN

GAIN_SLOTS = ("translation", "curvature")


def reward_terms(
    gains: GainSet,
    prev_gains: GainSet,
    reset_occurred: bool,
    rays: np.ndarray,
    cfg: RewardConfig,
    slots: Optional[Iterable[str]] = None,
) -> Dict[str, float]:
    """Individual reward terms keyed by name; ``slots=None`` scores both gain slots."""
    slots = GAIN_SLOTS if slots is None else tuple(slots)
    terms: Dict[str, float] = {}

    if "translation" in slots:
        magnitude = abs(gains.translation - NEUTRAL_TRANSLATION_GAIN) / TRANSLATION_RANGE
        change = abs(gains.translation - prev_gains.translation) / TRANSLATION_RANGE
        terms["translation"] = cfg.translation_magnitude * magnitude**2 + cfg.translation_change * change

    if "curvature" in slots:
        if cfg.curvature_penalty_mode == "verbatim":
            magnitude = abs(gains.curvature - 1.0) / CURVATURE_RANGE
        else:
            magnitude = abs(gains.curvature) / CURVATURE_RANGE
        change = abs(gains.curvature - prev_gains.curvature) / CURVATURE_RANGE
        terms["curvature"] = cfg.curvature_magnitude * magnitude**2 + cfg.curvature_change * change

    terms["reset"] = cfg.reset if reset_occurred else 0.0

    rays = np.asarray(rays, dtype=float)
    terms["near_obstacle"] = cfg.near_obstacle * (float(rays.min()) / float(rays.max()) - 1.0)
    return terms


def step_reward(
    gains: GainSet,
    prev_gains: GainSet,
    reset_occurred: bool,
    rays: np.ndarray,
    cfg: RewardConfig,
    slots: Optional[Iterable[str]] = None,
) -> float:
    return float(sum(reward_terms(gains, prev_gains, reset_occurred, rays, cfg, slots).values()))
