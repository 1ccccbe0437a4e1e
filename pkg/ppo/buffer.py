"""Per-agent trajectory memory with segment-wise advantage computation."""

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from ppo.advantages import gae
from ppo.losses import MiniBatch

_FIELDS = ("obs", "actions", "log_probs", "rewards", "values", "dones")


@dataclass
class RolloutBatch:
    """Flattened buffer contents in fixed agent order, ready for minibatching."""

    obs: np.ndarray
    actions: np.ndarray
    log_probs: np.ndarray
    rewards: np.ndarray
    values: np.ndarray
    advantages: np.ndarray
    returns: np.ndarray

    def __len__(self) -> int:
        return len(self.advantages)

    def minibatch(self, indices: np.ndarray, advantages: np.ndarray) -> MiniBatch:
        return MiniBatch(
            obs=self.obs[indices],
            actions=self.actions[indices],
            log_probs_old=self.log_probs[indices],
            advantages=advantages[indices],
            value_targets=self.returns[indices],
        )


class RolloutBuffer:
    """Stores (observation, pre-clamp action, log-prob, reward, value, done) per agent and step."""

    def __init__(self, agents: int):
        self.agents = agents
        self.clear()

    def clear(self) -> None:
        self._data: List[Dict[str, list]] = [{name: [] for name in _FIELDS} for _ in range(self.agents)]

    def __len__(self) -> int:
        return sum(len(agent["rewards"]) for agent in self._data)

    def add(
        self,
        agent: int,
        obs: np.ndarray,
        action: np.ndarray,
        log_prob: float,
        reward: float,
        value: float,
        done: bool,
    ) -> None:
        record = self._data[agent]
        record["obs"].append(np.asarray(obs, dtype=float))
        record["actions"].append(np.atleast_1d(np.asarray(action, dtype=float)))
        record["log_probs"].append(float(log_prob))
        record["rewards"].append(float(reward))
        record["values"].append(float(value))
        record["dones"].append(bool(done))

    @staticmethod
    def segments(dones: Sequence[bool], time_horizon: int) -> List[tuple]:
        """(start, end) index pairs cut after every episode end and every ``time_horizon`` steps."""
        bounds = []
        start = 0
        for index, done in enumerate(dones):
            if done or index + 1 - start == time_horizon:
                bounds.append((start, index + 1))
                start = index + 1
        if start < len(dones):
            bounds.append((start, len(dones)))
        return bounds

    def compute(
        self,
        bootstrap_values: Sequence[float],
        gamma: float,
        lambd: float,
        time_horizon: int,
    ) -> RolloutBatch:
        """GAE per segment; episode ends bootstrap 0, truncated segments bootstrap V of the next state."""
        columns: Dict[str, list] = {name: [] for name in (*_FIELDS, "advantages")}
        for agent, record in enumerate(self._data):
            if not record["rewards"]:
                continue
            rewards = np.asarray(record["rewards"])
            values = np.asarray(record["values"])
            advantages = np.empty_like(rewards)
            for start, end in self.segments(record["dones"], time_horizon):
                if record["dones"][end - 1]:
                    bootstrap = 0.0
                elif end < len(rewards):
                    bootstrap = values[end]
                else:
                    bootstrap = float(bootstrap_values[agent])
                advantages[start:end] = gae(rewards[start:end], values[start:end], bootstrap, gamma, lambd)
            for name in _FIELDS:
                columns[name].extend(record[name])
            columns["advantages"].extend(advantages)

        values = np.asarray(columns["values"])
        advantages = np.asarray(columns["advantages"])
        return RolloutBatch(
            obs=np.asarray(columns["obs"]),
            actions=np.asarray(columns["actions"]),
            log_probs=np.asarray(columns["log_probs"]),
            rewards=np.asarray(columns["rewards"]),
            values=values,
            advantages=advantages,
            returns=advantages + values,
        )
