"""First-order ascent optimizers over a flattened parameter vector."""

from typing import Tuple

import numpy as np

MIN_LEARNING_RATE = 1e-10


def linear_decay(learning_rate: float, env_steps: int, max_env_steps: int) -> float:
    """Step size decayed linearly from ``learning_rate`` at step 0 toward 0 at ``max_env_steps``."""
    progress = min(1.0, max(0.0, env_steps / max_env_steps))
    return max(MIN_LEARNING_RATE, learning_rate * (1.0 - progress))


class SGD:
    """Plain gradient ascent."""

    def __init__(self, size: int):
        self.size = size

    def step(self, params: np.ndarray, grads: np.ndarray, learning_rate: float) -> np.ndarray:
        return params + learning_rate * grads


class Adam:
    """Adaptive-moment gradient ascent with bias correction."""

    def __init__(self, size: int, betas: Tuple[float, float] = (0.9, 0.999), epsilon: float = 1e-8):
        self.beta_1, self.beta_2 = betas
        self.epsilon = epsilon
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, params: np.ndarray, grads: np.ndarray, learning_rate: float) -> np.ndarray:
        self.t += 1
        self.m = self.beta_1 * self.m + (1 - self.beta_1) * grads
        self.v = self.beta_2 * self.v + (1 - self.beta_2) * grads**2

        m_hat = self.m / (1 - self.beta_1**self.t)
        v_hat = self.v / (1 - self.beta_2**self.t)
        return params + learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


def create_optimizer(name: str, size: int, betas: Tuple[float, float] = (0.9, 0.999), epsilon: float = 1e-8):
    if name == "adam":
        return Adam(size, betas, epsilon)
    if name == "sgd":
        return SGD(size)
    raise ValueError(f"Unsupported optimizer: {name}")
