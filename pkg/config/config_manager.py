"""Configuration management module.

This module handles loading and managing configuration from multiple sources:
1. config.yaml (default configuration)
2. Environment variables (override config.yaml)
3. Explicit overrides from the command line (override everything)
"""

import math
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, TypeVar

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings

# Load environment variables
load_dotenv()

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "config.yaml"

SettingsT = TypeVar("SettingsT", bound=BaseModel)


class SceneConfig(BaseSettings):
    """Tracked space and obstacle layout."""

    half_width: float = Field(default=7.5, gt=0)
    half_depth: float = Field(default=7.5, gt=0)
    obstacle_count: int = Field(default=0, ge=0)
    obstacle_half_side: float = Field(default=1.25, gt=0)
    obstacles: List[Tuple[float, float]] = Field(default_factory=list)
    safety_margin: float = Field(default=0.0, ge=0)
    reposition_interval: int = Field(default=1000, gt=0)
    max_placement_attempts: int = Field(default=1000, gt=0)
    seed: int = Field(default=0)

    model_config = {
        "extra": "ignore",
        "env_prefix": "SCENE_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


class WalkerConfig(BaseSettings):
    """Virtual walker configuration."""

    step_length: float = Field(default=0.1, gt=0)
    target_threshold: float = Field(default=0.1, gt=0)
    pathgen: Literal["office", "exp_small", "exp_large", "long_walk", "random"] = "random"

    model_config = {
        "extra": "ignore",
        "env_prefix": "WALKER_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


class S2CParams(BaseModel):
    max_gain: float = Field(default=0.1333, gt=0)
    saturation_angle_deg: float = Field(default=45.0, gt=0, le=180)
    dead_zone: float = Field(default=1.25, ge=0)


class T2FParams(BaseModel):
    resolution_deg: float = Field(default=1.0, gt=0, le=90)


class ControllerConfig(BaseSettings):
    """Controller stack selection and heuristic tunables."""

    translation: Literal["ctg", "actg", "fixed", "rl"] = "actg"
    reset: Literal["2to1", "t2c", "t2f", "rl"] = "t2f"
    curvature: Literal["s2c", "zero", "rl"] = "s2c"
    fixed_translation_gain: float = Field(default=1.0, ge=0.86, le=1.26)
    s2c: S2CParams = Field(default_factory=S2CParams)
    t2f: T2FParams = Field(default_factory=T2FParams)

    model_config = {
        "extra": "ignore",
        "env_prefix": "CONTROLLER_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


class RewardConfig(BaseModel):
    """Per-step reward coefficients."""

    curvature_magnitude: float = -0.01
    curvature_change: float = -0.1
    translation_magnitude: float = -0.01
    translation_change: float = -0.1
    reset: float = -45.0
    near_obstacle: float = 0.2
    curvature_penalty_mode: Literal["verbatim", "neutral_zero"] = "neutral_zero"

    @field_validator(
        "curvature_magnitude",
        "curvature_change",
        "translation_magnitude",
        "translation_change",
        "reset",
        "near_obstacle",
    )
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("reward coefficients must be finite")
        return value


class PolicyConfig(BaseSettings):
    """Observation, decision schedule and reward settings of the RL environment."""

    num_rays: int = Field(default=60, gt=0)
    ray_spacing_deg: float = Field(default=6.0, gt=0)
    decision_interval: int = Field(default=1, gt=0)
    episode_length: int = Field(default=1000, gt=0)
    rewards: RewardConfig = Field(default_factory=RewardConfig)

    model_config = {
        "extra": "ignore",
        "env_prefix": "POLICY_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


class PPOConfig(BaseSettings):
    """PPO hyperparameters."""

    agents: int = Field(default=16, gt=0)
    batch_size: int = Field(default=2048, gt=0)
    buffer_size: int = Field(default=20480, gt=0)
    epsilon: float = Field(default=0.2, gt=0)
    gamma: float = Field(default=0.995, gt=0, le=1)
    lambd: float = Field(default=0.995, ge=0, le=1)
    learning_rate: float = Field(default=3e-4, gt=0)
    num_epoch: int = Field(default=3, gt=0)
    time_horizon: int = Field(default=256, gt=0)
    max_env_steps: int = Field(default=16_000_000, gt=0)
    value_coefficient: float = Field(default=0.5, ge=0)
    entropy_coefficient: float = Field(default=5e-3, ge=0)
    hidden_units: int = Field(default=128, gt=0)
    num_layers: int = Field(default=2, gt=0)
    optimizer: Literal["adam", "sgd"] = "adam"
    adam_betas: Tuple[float, float] = (0.9, 0.999)
    adam_epsilon: float = Field(default=1e-8, gt=0)
    log_std_init: float = Field(default=0.0, ge=-5.0, le=2.0)
    memory_size: int = Field(default=256, gt=0)
    sequence_length: int = Field(default=64, gt=0)
    seed: int = 0

    model_config = {
        "extra": "ignore",
        "env_prefix": "PPO_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }

    @model_validator(mode="after")
    def _buffer_multiple_of_batch(self) -> "PPOConfig":
        if self.buffer_size % self.batch_size != 0:
            raise ValueError(
                f"buffer_size ({self.buffer_size}) must be a multiple of batch_size ({self.batch_size})"
            )
        return self


Hyperparameters = PPOConfig


class HarnessConfig(BaseSettings):
    """Experiment driver configuration."""

    journey_steps: int = Field(default=100_000, ge=0)
    seeds: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    output_dir: str = "results"
    models_dir: str = ""
    train_env_steps: int = Field(default=2_000_000, gt=0)
    trajectory_steps: int = Field(default=1000, ge=0)
    workers: int = Field(default=1, gt=0)
    progress: bool = True

    model_config = {
        "extra": "ignore",
        "env_prefix": "HARNESS_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


class LoggingConfig(BaseSettings):
    """Logging configuration."""

    level: str = Field(default="INFO", alias="LOG_LEVEL")
    directory: str = Field(default="logs", alias="LOG_DIR")
    file: str = Field(default="redwalk.log", alias="LOG_FILE")
    format: str = "%(asctime)s [%(levelname)8s] %(name)s - %(message)s"
    date_format: str = "%Y-%m-%d %H:%M:%S"

    model_config = {
        "extra": "ignore",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "populate_by_name": True,
    }


def with_overrides(settings: SettingsT, **overrides: Any) -> SettingsT:
    """Return a validated copy of ``settings`` with the non-None ``overrides`` applied."""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return settings
    return type(settings).model_validate({**settings.model_dump(), **updates})


class ConfigManager:
    """Central configuration manager with fallback support."""

    _instance: Optional["ConfigManager"] = None
    _yaml_config: Dict[str, Any] = {}
    _config_path: Path = DEFAULT_CONFIG_PATH

    def __new__(cls):
        """Singleton pattern to ensure single instance."""
        if cls._instance is None:
            cls._instance = super(ConfigManager, cls).__new__(cls)
            cls._instance._load_yaml_config()
        return cls._instance

    def _load_yaml_config(self) -> None:
        """Load configuration from YAML file with fallback."""
        config_path = self._config_path
        try:
            if config_path.exists():
                with open(config_path, "r", encoding="utf-8") as f:
                    self._yaml_config = yaml.safe_load(f) or {}
            else:
                print(f"Warning: Config file not found at {config_path}. Using defaults.")
                self._yaml_config = {}
        except yaml.YAMLError as e:
            print(f"Error loading config file: {e}. Using defaults.")
            self._yaml_config = {}

    def load(self, path: Optional[str | Path] = None) -> "ConfigManager":
        """Switch to another YAML file (or back to the packaged default)."""
        self._config_path = Path(path) if path else DEFAULT_CONFIG_PATH
        self._load_yaml_config()
        return self

    @property
    def config_path(self) -> Path:
        return self._config_path

    def get_yaml_value(self, *keys: str, default: Any = None) -> Any:
        value = self._yaml_config
        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def _merge_section(self, settings_cls: type[SettingsT], section: str) -> SettingsT:
        """Build ``settings_cls`` from the environment, then fill unset fields from YAML."""
        settings = settings_cls()
        yaml_section = self.get_yaml_value(section, default={}) or {}
        prefix = settings_cls.model_config.get("env_prefix", "")

        updates = {}
        for name, field in settings_cls.model_fields.items():
            if name not in yaml_section:
                continue
            env_name = field.alias or f"{prefix}{name}".upper()
            # Environment variables win over YAML
            if os.getenv(env_name) is not None:
                continue
            updates[name] = yaml_section[name]

        return with_overrides(settings, **updates)

    @property
    def scene(self) -> SceneConfig:
        """Get tracked-space configuration."""
        return self._merge_section(SceneConfig, "scene")

    @property
    def walker(self) -> WalkerConfig:
        """Get virtual walker configuration."""
        return self._merge_section(WalkerConfig, "walker")

    @property
    def controllers(self) -> ControllerConfig:
        """Get controller stack configuration."""
        return self._merge_section(ControllerConfig, "controllers")

    @property
    def policy(self) -> PolicyConfig:
        """Get RL environment configuration."""
        return self._merge_section(PolicyConfig, "policy")

    @property
    def rewards(self) -> RewardConfig:
        return self.policy.rewards

    @property
    def ppo(self) -> PPOConfig:
        """Get PPO hyperparameters."""
        return self._merge_section(PPOConfig, "ppo")

    @property
    def harness(self) -> HarnessConfig:
        """Get experiment driver configuration."""
        return self._merge_section(HarnessConfig, "harness")

    @property
    def logging(self) -> LoggingConfig:
        """Get logging configuration."""
        return self._merge_section(LoggingConfig, "logging")


# Global config instance
config = ConfigManager()
