"""Clipped surrogate objective and its analytic gradients.

All quantities here are maximized: objective = L_clip - c1 * L_value + c2 * entropy.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ppo.distributions import entropy as gaussian_entropy
from ppo.distributions import log_prob
from ppo.network import LOG_STD_MAX, LOG_STD_MIN, NetworkParams, forward_with_cache, num_hidden_layers


@dataclass
class MiniBatch:
    obs: np.ndarray
    actions: np.ndarray
    log_probs_old: np.ndarray
    advantages: np.ndarray
    value_targets: np.ndarray

    def __len__(self) -> int:
        return len(self.advantages)


def _clip_ratio(ratio: np.ndarray, epsilon: float) -> np.ndarray:
    return np.clip(ratio, 1.0 - epsilon, 1.0 + epsilon)


def clipped_policy_loss(
    log_prob_new: np.ndarray,
    log_prob_old: np.ndarray,
    advantage: np.ndarray,
    epsilon: float,
) -> float:
    """Mean of min(rho * A, clip(rho, 1 - eps, 1 + eps) * A)."""
    ratio = np.exp(np.asarray(log_prob_new, dtype=float) - np.asarray(log_prob_old, dtype=float))
    advantage = np.asarray(advantage, dtype=float)
    return float(np.mean(np.minimum(ratio * advantage, _clip_ratio(ratio, epsilon) * advantage)))


def combined_loss(
    policy_term: float,
    value_pred: np.ndarray,
    value_target: np.ndarray,
    entropy: float,
    c1: float,
    c2: float,
) -> float:
    value_loss = float(np.mean((np.asarray(value_pred, dtype=float) - value_target) ** 2))
    return policy_term - c1 * value_loss + c2 * entropy


def combined_loss_and_grads(
    params: NetworkParams,
    batch: MiniBatch,
    epsilon: float,
    c1: float,
    c2: float,
) -> Tuple[float, NetworkParams, Dict[str, float]]:
    """Objective on ``batch``, its gradient for every parameter block, and diagnostics."""
    n = len(batch)
    cache = forward_with_cache(params, batch.obs)
    mean, log_std, value = cache.mean, cache.log_std, cache.value
    actions = np.asarray(batch.actions, dtype=float).reshape(mean.shape)
    advantages = np.asarray(batch.advantages, dtype=float)

    logp = log_prob(actions, mean, log_std)
    ratio = np.exp(logp - batch.log_probs_old)
    unclipped = ratio * advantages
    clipped = _clip_ratio(ratio, epsilon) * advantages
    policy_term = float(np.mean(np.minimum(unclipped, clipped)))
    value_error = value - batch.value_targets
    value_loss = float(np.mean(value_error**2))
    entropy = gaussian_entropy(log_std)
    objective = policy_term - c1 * value_loss + c2 * entropy

    # The min picks the unclipped branch wherever it is not larger; elsewhere the gradient is zero
    d_logp = np.where(unclipped <= clipped, unclipped, 0.0) / n

    sigma2 = np.exp(2.0 * log_std)
    diff = actions - mean
    d_mean = d_logp[:, None] * diff / sigma2
    d_log_std = np.sum(d_logp[:, None] * (diff**2 / sigma2 - 1.0), axis=0) + c2
    d_log_std = np.where(
        (params["log_std"] < LOG_STD_MIN) | (params["log_std"] > LOG_STD_MAX), 0.0, d_log_std
    )
    d_value = -c1 * 2.0 * value_error / n

    grads: NetworkParams = {}
    top = cache.hidden[-1]
    d_mu_pre = d_mean * (1.0 - mean**2)
    grads["W_mu"] = top.T @ d_mu_pre
    grads["b_mu"] = d_mu_pre.sum(axis=0)
    grads["W_v"] = top.T @ d_value[:, None]
    grads["b_v"] = np.array([d_value.sum()])
    grads["log_std"] = d_log_std

    d_h = d_mu_pre @ params["W_mu"].T + d_value[:, None] @ params["W_v"].T
    layers = num_hidden_layers(params)
    for layer in reversed(range(layers)):
        h = cache.hidden[layer]
        below = cache.hidden[layer - 1] if layer > 0 else cache.inputs
        d_z = d_h * (1.0 - h**2)
        grads[f"W{layer}"] = below.T @ d_z
        grads[f"b{layer}"] = d_z.sum(axis=0)
        if layer > 0:
            d_h = d_z @ params[f"W{layer}"].T

    diagnostics = {
        "objective": objective,
        "policy_loss": policy_term,
        "value_loss": value_loss,
        "entropy": entropy,
        "clip_fraction": float(np.mean(np.abs(ratio - 1.0) > epsilon)),
        "approx_kl": float(np.mean(batch.log_probs_old - logp)),
    }
    return objective, {name: grads[name] for name in params}, diagnostics
