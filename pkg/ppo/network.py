"""Feed-forward actor-critic network on plain numpy arrays.

Parameters live in an ordered dict of named blocks: hidden layers ``W0, b0, W1, b1, ...``,
the policy mean head ``W_mu, b_mu``, the value head ``W_v, b_v`` and a state-independent
``log_std``. Hidden layers and the mean head use tanh, so the mean lies in [-1, 1].
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ppo.errors import TrainingDivergedError

NetworkParams = Dict[str, np.ndarray]

LOG_STD_MIN = -5.0
LOG_STD_MAX = 2.0
HIDDEN_INIT_GAIN = np.sqrt(2.0)


def param_names(num_layers: int) -> List[str]:
    names: List[str] = []
    for layer in range(num_layers):
        names += [f"W{layer}", f"b{layer}"]
    return names + ["W_mu", "b_mu", "W_v", "b_v", "log_std"]


def num_hidden_layers(params: NetworkParams) -> int:
    return sum(1 for name in params if name.startswith("W") and name[1:].isdigit())


def layer_shapes(params: NetworkParams) -> Dict[str, Tuple[int, ...]]:
    return {name: tuple(array.shape) for name, array in params.items()}


def obs_dim(params: NetworkParams) -> int:
    return int(params["W0"].shape[0])


def act_dim(params: NetworkParams) -> int:
    return int(params["log_std"].shape[0])


def _orthogonal(rows: int, cols: int, gain: float, rng: np.random.Generator) -> np.ndarray:
    flat = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(flat)
    q *= np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return gain * q[:rows, :cols]


def init_params(
    obs_dim: int,
    act_dim: int,
    hidden_units: int = 128,
    num_layers: int = 2,
    rng: Optional[np.random.Generator] = None,
    zero_heads: bool = True,
    log_std_init: float = 0.0,
) -> NetworkParams:
    """Orthogonal hidden layers; zeroed heads give a neutral mean and zero value at start."""
    rng = rng if rng is not None else np.random.default_rng(0)
    params: NetworkParams = {}
    fan_in = obs_dim
    for layer in range(num_layers):
        params[f"W{layer}"] = _orthogonal(fan_in, hidden_units, HIDDEN_INIT_GAIN, rng)
        params[f"b{layer}"] = np.zeros(hidden_units)
        fan_in = hidden_units

    if zero_heads:
        params["W_mu"] = np.zeros((hidden_units, act_dim))
        params["W_v"] = np.zeros((hidden_units, 1))
    else:
        params["W_mu"] = _orthogonal(hidden_units, act_dim, 0.01, rng)
        params["W_v"] = _orthogonal(hidden_units, 1, 1.0, rng)
    params["b_mu"] = np.zeros(act_dim)
    params["b_v"] = np.zeros(1)
    params["log_std"] = np.full(act_dim, float(log_std_init))
    return params


def flatten(params: NetworkParams) -> np.ndarray:
    return np.concatenate([params[name].ravel() for name in param_names(num_hidden_layers(params))])


def unflatten(vector: np.ndarray, template: NetworkParams) -> NetworkParams:
    """Inverse of ``flatten`` using the block shapes of ``template``."""
    params: NetworkParams = {}
    offset = 0
    for name in param_names(num_hidden_layers(template)):
        shape = template[name].shape
        size = int(np.prod(shape))
        params[name] = np.asarray(vector[offset : offset + size], dtype=float).reshape(shape)
        offset += size
    if offset != vector.size:
        raise ValueError(f"Vector of size {vector.size} does not match {offset} parameters")
    return params


def copy_params(params: NetworkParams) -> NetworkParams:
    return {name: array.copy() for name, array in params.items()}


def first_non_finite(blocks: Dict[str, np.ndarray]) -> Optional[str]:
    for name, array in blocks.items():
        if not np.all(np.isfinite(array)):
            return name
    return None


def clamped_log_std(params: NetworkParams) -> np.ndarray:
    return np.clip(params["log_std"], LOG_STD_MIN, LOG_STD_MAX)


@dataclass
class ForwardCache:
    """Activations kept for backpropagation."""

    inputs: np.ndarray
    hidden: List[np.ndarray]
    mean: np.ndarray
    log_std: np.ndarray
    value: np.ndarray


def forward_with_cache(params: NetworkParams, obs: np.ndarray) -> ForwardCache:
    h = np.atleast_2d(np.asarray(obs, dtype=float))
    inputs = h
    hidden = []
    for layer in range(num_hidden_layers(params)):
        h = np.tanh(h @ params[f"W{layer}"] + params[f"b{layer}"])
        hidden.append(h)
    mean = np.tanh(h @ params["W_mu"] + params["b_mu"])
    value = (h @ params["W_v"] + params["b_v"])[:, 0]
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(value))):
        raise TrainingDivergedError(first_non_finite(params) or "outputs", "network outputs")
    return ForwardCache(inputs, hidden, mean, clamped_log_std(params), value)


def forward(params: NetworkParams, obs: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(mean, log_std, value) for one observation (returns 1-d mean, scalar-shaped value) or a batch."""
    cache = forward_with_cache(params, obs)
    if np.ndim(obs) == 1:
        return cache.mean[0], cache.log_std, cache.value[0]
    return cache.mean, cache.log_std, cache.value
