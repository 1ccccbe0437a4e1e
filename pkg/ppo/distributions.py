"""Diagonal Gaussian action head."""

from typing import NamedTuple

import numpy as np

HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def log_prob(actions: np.ndarray, mean: np.ndarray, log_std: np.ndarray) -> np.ndarray:
    """Log-density summed over action dimensions (last axis)."""
    z = (np.asarray(actions, dtype=float) - mean) / np.exp(log_std)
    return np.sum(-0.5 * z**2 - log_std - HALF_LOG_2PI, axis=-1)


def entropy(log_std: np.ndarray) -> float:
    return float(np.sum(log_std + 0.5 + HALF_LOG_2PI))


def sample_gaussian(mean: np.ndarray, log_std: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Pre-clamp sample from Normal(mean, exp(log_std))."""
    mean = np.asarray(mean, dtype=float)
    return mean + np.exp(log_std) * rng.standard_normal(mean.shape)


class SampledAction(NamedTuple):
    action: np.ndarray
    sample: np.ndarray
    log_prob: np.ndarray


def sample_action(mean: np.ndarray, log_std: np.ndarray, rng: np.random.Generator) -> SampledAction:
    """Action clamped to [-1, 1], with the pre-clamp sample and its log-density.

    The buffer stores ``sample`` so that probability ratios use the density that was sampled.
    A zero spread (``log_std`` of -inf) returns the mean as a point mass with log-density +inf.
    """
    mean = np.asarray(mean, dtype=float)
    log_std = np.asarray(log_std, dtype=float)
    std = np.exp(log_std)
    sample = sample_gaussian(mean, log_std, rng)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std > 0.0, (sample - mean) / std, 0.0)
        logp = np.sum(-0.5 * z**2 - log_std - HALF_LOG_2PI, axis=-1)
    return SampledAction(np.clip(sample, -1.0, 1.0), sample, logp)
