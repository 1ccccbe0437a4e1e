"""Advantage estimators over one trajectory segment."""

import numpy as np

from ppo.errors import ContractError


def _check(rewards: np.ndarray, values: np.ndarray) -> None:
    if rewards.shape != values.shape or rewards.ndim != 1:
        raise ContractError(
            f"rewards {rewards.shape} and values {values.shape} must be 1-d segments of equal length"
        )


def gae(
    rewards: np.ndarray,
    values: np.ndarray,
    bootstrap_value: float,
    gamma: float,
    lambd: float,
) -> np.ndarray:
    """Generalized advantage estimates by backward recursion.

    ``bootstrap_value`` is V(s_T) for a truncated segment and 0 when the segment ends an episode.
    """
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    _check(rewards, values)

    next_values = np.append(values[1:], float(bootstrap_value))
    deltas = rewards + gamma * next_values - values
    advantages = np.empty_like(deltas)
    running = 0.0
    for t in reversed(range(len(deltas))):
        running = deltas[t] + gamma * lambd * running
        advantages[t] = running
    return advantages


def nstep_advantage(
    rewards: np.ndarray,
    values: np.ndarray,
    bootstrap_value: float,
    gamma: float,
) -> np.ndarray:
    """Discounted return to the segment end (bootstrapped) minus V(s_t); GAE with lambda = 1."""
    rewards = np.asarray(rewards, dtype=float)
    values = np.asarray(values, dtype=float)
    _check(rewards, values)

    returns = np.empty_like(rewards)
    running = float(bootstrap_value)
    for t in reversed(range(len(rewards))):
        running = rewards[t] + gamma * running
        returns[t] = running
    return returns - values
