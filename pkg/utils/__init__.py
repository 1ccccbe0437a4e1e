"""Utilities package initialization."""

from .angle_utils import (
    TWO_PI,
    bearing,
    degrees_of_turn,
    signed_angle,
    wrap_angle,
    wrap_positive,
)
from .logger import LoggerManager, get_logger
from .plot_helper import PlotHelper

__all__ = [
    "get_logger",
    "LoggerManager",
    "PlotHelper",
    "TWO_PI",
    "bearing",
    "degrees_of_turn",
    "signed_angle",
    "wrap_angle",
    "wrap_positive",
]
