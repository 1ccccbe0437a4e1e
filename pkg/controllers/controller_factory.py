import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from config import ControllerConfig, config
from controllers.curvature import s2c
from controllers.reset import t2c, t2f, two_one_turn
from controllers.translation import actg, ctg
from geometry import Pose, TrackedSpace
from utils.logger import get_logger

logger = get_logger(__name__)

RL = "rl"
SLOTS = ("translation", "reset", "curvature")

TRANSLATION_CHOICES = ("ctg", "actg", "fixed", RL)
RESET_CHOICES = ("2to1", "t2c", "t2f", RL)
CURVATURE_CHOICES = ("s2c", "zero", RL)

_LABELS = {
    "ctg": "CTG",
    "actg": "ACTG",
    "fixed": "Fixed",
    "2to1": "2:1-Turn",
    "t2c": "T2C",
    "t2f": "T2F",
    "s2c": "S2C",
    "zero": "Zero",
    RL: "RL",
}


class RLSlotError(RuntimeError):
    """A heuristic was requested for a slot that the learned policy controls."""


@dataclass(frozen=True)
class ControllerStack:
    """One algorithm per slot (translation, reset, curvature); ``rl`` marks the learned slot."""

    translation: str = "actg"
    reset: str = "t2f"
    curvature: str = "s2c"
    params: ControllerConfig = field(default_factory=ControllerConfig, compare=False)
    _translation_fn: Optional[Callable[[Pose, TrackedSpace], float]] = field(
        init=False, repr=False, compare=False, default=None
    )
    _reset_fn: Optional[Callable[[Pose, TrackedSpace], float]] = field(
        init=False, repr=False, compare=False, default=None
    )
    _curvature_fn: Optional[Callable[[Pose, TrackedSpace], float]] = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self) -> None:
        for slot, choices in zip(SLOTS, (TRANSLATION_CHOICES, RESET_CHOICES, CURVATURE_CHOICES)):
            value = getattr(self, slot)
            if value not in choices:
                raise ValueError(f"Unsupported {slot} algorithm: {value} (expected one of {choices})")

        params = self.params
        translation_fns: Dict[str, Callable[[Pose, TrackedSpace], float]] = {
            "ctg": ctg,
            "actg": actg,
            "fixed": lambda pose, space: params.fixed_translation_gain,
        }
        reset_fns: Dict[str, Callable[[Pose, TrackedSpace], float]] = {
            "2to1": lambda pose, space: two_one_turn(pose),
            "t2c": t2c,
            "t2f": lambda pose, space: t2f(pose, space, params.t2f.resolution_deg),
        }
        curvature_fns: Dict[str, Callable[[Pose, TrackedSpace], float]] = {
            "s2c": lambda pose, space: s2c(
                pose,
                space,
                max_gain=params.s2c.max_gain,
                saturation_angle=math.radians(params.s2c.saturation_angle_deg),
                dead_zone=params.s2c.dead_zone,
            ),
            "zero": lambda pose, space: 0.0,
        }
        object.__setattr__(self, "_translation_fn", translation_fns.get(self.translation))
        object.__setattr__(self, "_reset_fn", reset_fns.get(self.reset))
        object.__setattr__(self, "_curvature_fn", curvature_fns.get(self.curvature))

    @property
    def rl_slots(self) -> Tuple[str, ...]:
        return tuple(slot for slot in SLOTS if getattr(self, slot) == RL)

    @property
    def rl_slot(self) -> Optional[str]:
        slots = self.rl_slots
        return slots[0] if slots else None

    @property
    def label(self) -> str:
        return f"({_LABELS[self.translation]}, {_LABELS[self.reset]}, {_LABELS[self.curvature]})"

    @property
    def key(self) -> str:
        return f"{self.translation}-{self.reset}-{self.curvature}"

    def translation_gain(self, pose: Pose, space: TrackedSpace) -> float:
        if self._translation_fn is None:
            raise RLSlotError("translation slot is controlled by the policy")
        return self._translation_fn(pose, space)

    def reset_heading(self, pose: Pose, space: TrackedSpace) -> float:
        if self._reset_fn is None:
            raise RLSlotError("reset slot is controlled by the policy")
        return self._reset_fn(pose, space)

    def curvature_gain(self, pose: Pose, space: TrackedSpace) -> float:
        if self._curvature_fn is None:
            raise RLSlotError("curvature slot is controlled by the policy")
        return self._curvature_fn(pose, space)


class ControllerFactory:
    """Factory for creating controller stacks from configuration."""

    @staticmethod
    def create_stack(
        translation: Optional[str] = None,
        reset: Optional[str] = None,
        curvature: Optional[str] = None,
        params: Optional[ControllerConfig] = None,
    ) -> ControllerStack:
        params = params or config.controllers
        stack = ControllerStack(
            translation=(translation or params.translation).lower(),
            reset=(reset or params.reset).lower(),
            curvature=(curvature or params.curvature).lower(),
            params=params,
        )
        if len(stack.rl_slots) > 1:
            raise ValueError(
                f"At most one slot may be RL-controlled, got {', '.join(stack.rl_slots)}"
            )
        logger.debug(f"Controller stack created: {stack.label}")
        return stack

    @staticmethod
    def heuristic() -> ControllerStack:
        """The best heuristic combination (ACTG, T2F, S2C)."""
        return ControllerFactory.create_stack("actg", "t2f", "s2c")

    @staticmethod
    def with_rl_slot(slot: str, params: Optional[ControllerConfig] = None) -> ControllerStack:
        """Heuristic stack with one slot replaced by the learned policy."""
        if slot not in SLOTS:
            raise ValueError(f"Unknown slot: {slot} (expected one of {SLOTS})")
        choices = {"translation": "actg", "reset": "t2f", "curvature": "s2c"}
        choices[slot] = RL
        return ControllerFactory.create_stack(params=params, **choices)


# Convenience function
def create_stack(
    translation: Optional[str] = None,
    reset: Optional[str] = None,
    curvature: Optional[str] = None,
    params: Optional[ControllerConfig] = None,
) -> ControllerStack:
    return ControllerFactory.create_stack(translation, reset, curvature, params)
