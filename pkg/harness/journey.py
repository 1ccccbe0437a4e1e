"""Single-journey runner: one controller stack, one seed, a fixed number of ticks."""

import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from config import PolicyConfig, SceneConfig, WalkerConfig
from controllers import ControllerStack
from geometry import Point
from harness.model_io import MissingModelError, check_dimensions
from locomotion import TrajectoryLogger, resets_per_km
from policy import RedirectionEnv
from ppo import NetworkParams, forward
from utils import get_logger

logger = get_logger(__name__)

# Inference budget per decision
DECISION_BUDGET_MS = 1.0


@dataclass
class JourneyMetrics:
    """Outcome of one journey."""

    stack: str
    seed: int
    steps: int
    resets: int
    resets_per_km: float
    distance_virtual: float
    distance_physical: float
    reset_positions: List[Point] = field(default_factory=list)
    reset_angles: List[float] = field(default_factory=list)
    decision_time_ms: float = math.nan
    stuck_ticks: int = 0
    fallback_resets: int = 0

    @property
    def mean_reset_angle(self) -> float:
        return float(np.mean(self.reset_angles)) if self.reset_angles else math.nan

    @property
    def sd_reset_angle(self) -> float:
        return float(np.std(self.reset_angles)) if self.reset_angles else math.nan

    def to_row(self) -> Dict[str, Any]:
        return {
            "controller": self.stack,
            "seed": self.seed,
            "steps": self.steps,
            "resets": self.resets,
            "resets_per_km": self.resets_per_km,
            "distance_virtual": self.distance_virtual,
            "distance_physical": self.distance_physical,
            "mean_reset_angle": self.mean_reset_angle,
            "sd_reset_angle": self.sd_reset_angle,
            "decision_time_ms": self.decision_time_ms,
            "stuck_ticks": self.stuck_ticks,
            "fallback_resets": self.fallback_resets,
        }


def run_journey(
    stack: ControllerStack,
    steps: int,
    seed: int,
    scene: Optional[SceneConfig] = None,
    walker: Optional[WalkerConfig] = None,
    policy: Optional[PolicyConfig] = None,
    params: Optional[NetworkParams] = None,
    trajectory: Optional[TrajectoryLogger] = None,
    progress: bool = False,
) -> JourneyMetrics:
    """Walk ``steps`` ticks; RL slots act on the deterministic policy mean."""
    env = RedirectionEnv(stack, scene=scene, walker=walker, policy=policy, seed=seed, trajectory=trajectory)
    if env.rl_slot is not None:
        if params is None:
            raise MissingModelError(f"Stack {stack.label} has an RL slot but no model was supplied")
        check_dimensions(params, env.observation_size)

    obs = env.reset()
    decision_seconds = 0.0
    decisions = 0
    with tqdm(total=steps, disable=not progress, desc=stack.label, unit="tick", leave=False) as bar:
        while env.tick < steps:
            action = None
            if env.rl_slot is not None:
                start = time.perf_counter()
                mean, _, _ = forward(params, obs)
                decision_seconds += time.perf_counter() - start
                decisions += 1
                action = float(mean[0])
            before = env.tick
            obs, _, _, _ = env.step(action, max_ticks=steps - env.tick)
            bar.update(env.tick - before)

    state = env.state
    metrics = JourneyMetrics(
        stack=stack.label,
        seed=seed,
        steps=steps,
        resets=state.reset_count,
        resets_per_km=resets_per_km(state.reset_count, steps, env.walker_config.step_length),
        distance_virtual=state.distance_walked_virtual,
        distance_physical=state.distance_walked_physical,
        reset_positions=list(env.reset_positions),
        reset_angles=list(env.reset_angles),
        decision_time_ms=1000.0 * decision_seconds / decisions if decisions else math.nan,
        stuck_ticks=env.stuck_ticks,
        fallback_resets=env.fallback_resets,
    )
    if decisions and metrics.decision_time_ms > DECISION_BUDGET_MS:
        logger.warning(
            f"Policy inference took {metrics.decision_time_ms:.3f} ms per decision "
            f"(budget {DECISION_BUDGET_MS} ms)"
        )
    summary = (
        f"Journey {stack.label} seed {seed}: {metrics.resets} resets in {steps} ticks "
        f"({metrics.resets_per_km:.2f} per km, {metrics.fallback_resets} fallback resets, "
        f"{metrics.stuck_ticks} stuck ticks)"
    )
    if metrics.stuck_ticks:
        logger.warning(summary)
    else:
        logger.info(summary)
    return metrics
