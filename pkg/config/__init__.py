"""Configuration package initialization."""

from .config_manager import (
    ConfigManager,
    ControllerConfig,
    HarnessConfig,
    Hyperparameters,
    LoggingConfig,
    PolicyConfig,
    PPOConfig,
    RewardConfig,
    S2CParams,
    SceneConfig,
    T2FParams,
    WalkerConfig,
    config,
    with_overrides,
)

__all__ = [
    "ConfigManager",
    "ControllerConfig",
    "HarnessConfig",
    "Hyperparameters",
    "LoggingConfig",
    "PolicyConfig",
    "PPOConfig",
    "RewardConfig",
    "S2CParams",
    "SceneConfig",
    "T2FParams",
    "WalkerConfig",
    "config",
    "with_overrides",
]
