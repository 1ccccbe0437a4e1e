"""Versioned YAML model documents for trained policies."""

from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from ppo import NetworkParams, act_dim, layer_shapes, obs_dim, param_names
from utils import get_logger

logger = get_logger(__name__)

MODEL_FORMAT_VERSION = 1

_Loader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)
_Dumper = getattr(yaml, "CSafeDumper", yaml.SafeDumper)


class ModelFileError(ValueError):
    """The model file is unreadable, truncated or malformed."""


class ModelVersionError(ModelFileError):
    """The model file was written by an incompatible format version."""


class ModelDimensionError(ModelFileError):
    """The model's observation or action size does not match the environment."""


class MissingModelError(ValueError):
    """An RL condition needs a model file that does not exist."""


class ModelDocument(BaseModel):
    """On-disk layout of a trained policy."""

    version: int
    slot: str
    obs_dim: int = Field(gt=0)
    act_dim: int = Field(gt=0)
    layer_shapes: Dict[str, List[int]]
    params: Dict[str, List[float]]
    normalization: Dict[str, float] = Field(default_factory=dict)
    hyperparameters: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0

    @model_validator(mode="after")
    def _blocks_match_shapes(self) -> "ModelDocument":
        if set(self.params) != set(self.layer_shapes):
            raise ValueError("parameter blocks do not match layer_shapes")
        for name, shape in self.layer_shapes.items():
            expected = int(np.prod(shape)) if shape else 1
            if len(self.params[name]) != expected:
                raise ValueError(f"block {name} holds {len(self.params[name])} values, shape {shape} needs {expected}")
        return self

    def to_params(self) -> NetworkParams:
        layers = sum(1 for name in self.layer_shapes if name.startswith("W") and name[1:].isdigit())
        return {
            name: np.asarray(self.params[name], dtype=float).reshape(self.layer_shapes[name])
            for name in param_names(layers)
        }


def save_model(
    params: NetworkParams,
    path: str | Path,
    slot: str,
    hyperparameters: Optional[Dict[str, Any]] = None,
    normalization: Optional[Dict[str, float]] = None,
    seed: int = 0,
) -> Path:
    """Write ``params`` as a model document; floats are stored with round-trip precision."""
    path = Path(path)
    document = ModelDocument(
        version=MODEL_FORMAT_VERSION,
        slot=slot,
        obs_dim=obs_dim(params),
        act_dim=act_dim(params),
        layer_shapes={name: list(shape) for name, shape in layer_shapes(params).items()},
        params={name: [float(value) for value in array.ravel()] for name, array in params.items()},
        normalization=normalization or {},
        hyperparameters=hyperparameters or {},
        seed=seed,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.dump(document.model_dump(), f, Dumper=_Dumper, default_flow_style=None, sort_keys=False)
    logger.debug(f"Model saved: {path} ({document.obs_dim} obs, slot {slot})")
    return path


def load_model_document(path: str | Path) -> ModelDocument:
    path = Path(path)
    if not path.exists():
        raise MissingModelError(f"Model file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.load(f, Loader=_Loader)
    except (yaml.YAMLError, UnicodeDecodeError) as e:
        raise ModelFileError(f"Malformed model file {path}: {e}") from e

    if not isinstance(raw, dict):
        raise ModelFileError(f"Malformed model file {path}: expected a mapping")
    if raw.get("version") != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"Model file {path} has version {raw.get('version')}, expected {MODEL_FORMAT_VERSION}"
        )
    try:
        document = ModelDocument.model_validate(raw)
    except ValidationError as e:
        raise ModelFileError(f"Malformed model file {path}: {e}") from e
    logger.debug(f"Model loaded: {path}")
    return document


def check_dimensions(params: NetworkParams, expected_obs_dim: int, expected_act_dim: int = 1) -> None:
    if obs_dim(params) != expected_obs_dim or act_dim(params) != expected_act_dim:
        raise ModelDimensionError(
            f"Model expects {obs_dim(params)} observations and {act_dim(params)} actions; "
            f"environment provides {expected_obs_dim} and {expected_act_dim}"
        )


def load_model(path: str | Path, expected_obs_dim: Optional[int] = None) -> NetworkParams:
    params = load_model_document(path).to_params()
    if expected_obs_dim is not None:
        check_dimensions(params, expected_obs_dim)
    return params
