"""Synchronous PPO: lockstep rollouts over parallel environments, then clipped-objective updates."""

from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from config import PPOConfig
from controllers import ControllerStack
from locomotion import resets_per_km
from policy import RedirectionEnv
from ppo.buffer import RolloutBuffer
from ppo.distributions import sample_action
from ppo.errors import TrainingDivergedError
from ppo.losses import combined_loss_and_grads
from ppo.network import NetworkParams, first_non_finite, flatten, forward, init_params, unflatten
from ppo.optimizer import create_optimizer, linear_decay
from utils import get_logger

logger = get_logger(__name__)

EnvFactory = Callable[[ControllerStack, int], RedirectionEnv]

TRAINING_LOG_COLUMNS = [
    "env_steps",
    "mean_reward",
    "reset_rate",
    "policy_loss",
    "value_loss",
    "entropy",
    "learning_rate",
]

ADVANTAGE_NORM_EPS = 1e-8


def update(
    params: NetworkParams,
    buffer: RolloutBuffer,
    hyper: PPOConfig,
    bootstrap_values: Sequence[float],
    optimizer=None,
    rng: Optional[np.random.Generator] = None,
    learning_rate: Optional[float] = None,
) -> Tuple[NetworkParams, Dict[str, float]]:
    """Run ``num_epoch`` passes of shuffled minibatches over the buffer, then clear it."""
    batch = buffer.compute(bootstrap_values, hyper.gamma, hyper.lambd, hyper.time_horizon)
    optimizer = optimizer or create_optimizer(
        hyper.optimizer, flatten(params).size, hyper.adam_betas, hyper.adam_epsilon
    )
    rng = rng if rng is not None else np.random.default_rng(hyper.seed)
    learning_rate = hyper.learning_rate if learning_rate is None else learning_rate

    advantages = (batch.advantages - batch.advantages.mean()) / (batch.advantages.std() + ADVANTAGE_NORM_EPS)

    totals: Dict[str, float] = {}
    count = 0
    for _ in range(hyper.num_epoch):
        order = rng.permutation(len(batch))
        for start in range(0, len(batch), hyper.batch_size):
            minibatch = batch.minibatch(order[start : start + hyper.batch_size], advantages)
            _, grads, diagnostics = combined_loss_and_grads(
                params,
                minibatch,
                hyper.epsilon,
                hyper.value_coefficient,
                hyper.entropy_coefficient,
            )
            bad = first_non_finite(grads)
            if bad is not None:
                raise TrainingDivergedError(bad, "gradients")

            vector = optimizer.step(flatten(params), flatten(grads), learning_rate)
            params = unflatten(vector, params)
            bad = first_non_finite(params)
            if bad is not None:
                raise TrainingDivergedError(bad)

            for key, value in diagnostics.items():
                totals[key] = totals.get(key, 0.0) + value
            count += 1

    buffer.clear()
    return params, {key: value / count for key, value in totals.items()}


class PPOTrainer:
    """Collects ``buffer_size`` decisions across ``agents`` environments per update."""

    def __init__(
        self,
        env_factory: EnvFactory,
        stack: ControllerStack,
        hyper: PPOConfig,
        params: Optional[NetworkParams] = None,
        progress: bool = False,
    ):
        if len(stack.rl_slots) != 1:
            raise ValueError(f"Training needs exactly one RL slot, stack {stack.label} has {len(stack.rl_slots)}")
        self.stack = stack
        self.hyper = hyper
        self.progress = progress

        seeds = np.random.SeedSequence(hyper.seed).generate_state(hyper.agents)
        self.envs = [env_factory(stack, int(seed)) for seed in seeds]
        self.obs = np.stack([env.reset() for env in self.envs])

        init_rng, self.update_rng = (
            np.random.default_rng(seq) for seq in np.random.SeedSequence(hyper.seed).spawn(2)
        )
        self.params = params or init_params(
            self.obs.shape[1],
            1,
            hidden_units=hyper.hidden_units,
            num_layers=hyper.num_layers,
            rng=init_rng,
            zero_heads=True,
            log_std_init=hyper.log_std_init,
        )
        self.optimizer = create_optimizer(
            hyper.optimizer, flatten(self.params).size, hyper.adam_betas, hyper.adam_epsilon
        )
        self.buffer = RolloutBuffer(hyper.agents)
        self.env_steps = 0
        self.updates = 0
        self.training_log: List[Dict[str, float]] = []

    def collect(self) -> Dict[str, float]:
        """Step all environments in agent order until the buffer is full."""
        ticks_before = sum(env.tick for env in self.envs)
        resets_before = sum(env.resets for env in self.envs)
        reward_total = 0.0
        decisions = 0

        while len(self.buffer) < self.hyper.buffer_size:
            mean, log_std, value = forward(self.params, self.obs)
            for agent, env in enumerate(self.envs):
                drawn = sample_action(mean[agent], log_std, env.action_rng)
                next_obs, reward, done, _ = env.step(float(drawn.action[0]))
                self.buffer.add(
                    agent, self.obs[agent], drawn.sample, float(drawn.log_prob), reward, value[agent], done
                )
                self.obs[agent] = next_obs
                reward_total += reward
                decisions += 1
            self.env_steps += len(self.envs)

        ticks = sum(env.tick for env in self.envs) - ticks_before
        resets = sum(env.resets for env in self.envs) - resets_before
        step_length = self.envs[0].walker_config.step_length
        return {
            "mean_reward": reward_total / max(decisions, 1),
            "reset_rate": resets_per_km(resets, ticks, step_length),
        }

    def train(self) -> NetworkParams:
        hyper = self.hyper
        logger.info(
            f"Training {self.stack.label}: {hyper.agents} agents, buffer {hyper.buffer_size}, "
            f"{hyper.max_env_steps} env steps"
        )
        with tqdm(total=hyper.max_env_steps, disable=not self.progress, desc="train", unit="step") as bar:
            while self.env_steps < hyper.max_env_steps:
                learning_rate = linear_decay(hyper.learning_rate, self.env_steps, hyper.max_env_steps)
                before = self.env_steps
                stats = self.collect()
                _, _, bootstrap = forward(self.params, self.obs)
                self.params, diagnostics = update(
                    self.params,
                    self.buffer,
                    hyper,
                    bootstrap,
                    optimizer=self.optimizer,
                    rng=self.update_rng,
                    learning_rate=learning_rate,
                )
                self.updates += 1
                row = {
                    "env_steps": self.env_steps,
                    "mean_reward": stats["mean_reward"],
                    "reset_rate": stats["reset_rate"],
                    "policy_loss": diagnostics["policy_loss"],
                    "value_loss": diagnostics["value_loss"],
                    "entropy": diagnostics["entropy"],
                    "learning_rate": learning_rate,
                }
                self.training_log.append(row)
                bar.update(self.env_steps - before)
                logger.info(
                    f"Update {self.updates} at {self.env_steps} steps: reward {row['mean_reward']:.4f}, "
                    f"resets/km {row['reset_rate']:.2f}, value loss {row['value_loss']:.4f}"
                )
        return self.params

    def training_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.training_log, columns=TRAINING_LOG_COLUMNS)

    def write_training_log(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.training_frame().to_csv(path, index=False)
        logger.info(f"Training log written: {path}")
        return path


def train(
    env_factory: EnvFactory,
    stack: ControllerStack,
    hyper: PPOConfig,
    progress: bool = False,
) -> NetworkParams:
    return PPOTrainer(env_factory, stack, hyper, progress=progress).train()
