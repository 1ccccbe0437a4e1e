"""Controllers package initialization."""

from .controller_factory import (
    RL,
    SLOTS,
    ControllerFactory,
    ControllerStack,
    RLSlotError,
    create_stack,
)
from .curvature import s2c
from .reset import t2c, t2f, t2f_scan, two_one_turn
from .translation import actg, alpha_center, ctg

__all__ = [
    "RL",
    "SLOTS",
    "ControllerFactory",
    "ControllerStack",
    "RLSlotError",
    "actg",
    "alpha_center",
    "create_stack",
    "ctg",
    "s2c",
    "t2c",
    "t2f",
    "t2f_scan",
    "two_one_turn",
]
