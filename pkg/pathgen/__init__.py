"""Path generation package initialization."""

from .methods import (
    EXPLORATION_LARGE,
    EXPLORATION_SMALL,
    LONG_WALK,
    OFFICE_BUILDING,
    PATH_METHODS,
    RANDOM,
    PathMethod,
    get_path_method,
    next_target,
)
from .walker import DEFAULT_TARGET_THRESHOLD, TargetConsumed, VirtualWalker, walk_direction

__all__ = [
    "DEFAULT_TARGET_THRESHOLD",
    "EXPLORATION_LARGE",
    "EXPLORATION_SMALL",
    "LONG_WALK",
    "OFFICE_BUILDING",
    "PATH_METHODS",
    "RANDOM",
    "PathMethod",
    "TargetConsumed",
    "VirtualWalker",
    "get_path_method",
    "next_target",
    "walk_direction",
]
