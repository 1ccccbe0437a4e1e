"""Decoding of the raw policy output into slot-specific gains and turns."""

import math

from locomotion import MAX_CURVATURE_GAIN
from utils.angle_utils import wrap_positive

TRANSLATION_SCALE = 0.2
TRANSLATION_OFFSET = 1.06
CURVATURE_SCALE = MAX_CURVATURE_GAIN
RESET_SCALE_DEG = 180.0


class UnknownSlotError(ValueError):
    """Raised for a controller slot the policy cannot drive."""


def clamp_action(raw: float) -> float:
    return min(1.0, max(-1.0, float(raw)))


def decode_action(raw: float, slot: str) -> float:
    """Translation gain, curvature gain (1/m) or relative reset turn in radians within [0, 2*pi)."""
    raw = clamp_action(raw)
    if slot == "translation":
        return TRANSLATION_SCALE * raw + TRANSLATION_OFFSET
    if slot == "curvature":
        return CURVATURE_SCALE * raw
    if slot == "reset":
        return wrap_positive(math.radians((raw * RESET_SCALE_DEG) % 360.0))
    raise UnknownSlotError(f"Unknown controller slot: {slot}")
