"""Redirected-walking environment driven by a controller stack and, optionally, a policy."""

import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import PolicyConfig, SceneConfig, WalkerConfig, config
from controllers import ControllerStack, t2f
from geometry import Point, Pose, TrackedSpace, build_tracked_space, refresh_obstacles, sense_surroundings
from locomotion import (
    CollisionEvent,
    GainSet,
    TrajectoryLogger,
    UserState,
    advance,
    perform_reset,
    turn,
)
from pathgen import VirtualWalker, get_path_method
from policy.actions import clamp_action, decode_action
from policy.observation import encode_observation, observation_size
from policy.rewards import GAIN_SLOTS, step_reward
from utils import get_logger
from utils.angle_utils import degrees_of_turn

logger = get_logger(__name__)

StepResult = Tuple[Optional[np.ndarray], float, bool, Dict[str, Any]]


class RedirectionEnv:
    """One simulated user walking an endless virtual path inside a tracked space.

    Each tick the walker plans one virtual step, the user turns with it, the stack (or the
    decoded policy action) supplies the gains and the step is walked. A blocked step triggers
    a reset and is retried. Obstacles are redrawn every ``reposition_interval`` ticks.

    ``step`` advances one decision (``decision_interval`` ticks). Observations and rewards are
    only computed when the stack has an RL slot; heuristic runs get ``None`` and ``0.0``.
    """

    def __init__(
        self,
        stack: ControllerStack,
        scene: Optional[SceneConfig] = None,
        walker: Optional[WalkerConfig] = None,
        policy: Optional[PolicyConfig] = None,
        seed: int = 0,
        trajectory: Optional[TrajectoryLogger] = None,
    ):
        self.stack = stack
        self.scene = scene or config.scene
        self.walker_config = walker or config.walker
        self.policy_config = policy or config.policy
        self.seed = seed
        self.trajectory = trajectory

        self.rl_slot = stack.rl_slot
        self.observe = self.rl_slot is not None
        self.reward_slots = tuple(slot for slot in stack.rl_slots if slot in GAIN_SLOTS)
        self.observation_size = observation_size(self.policy_config.num_rays)

        self._base_space = build_tracked_space(self.scene)
        self.space: TrackedSpace = self._base_space
        self.state: Optional[UserState] = None
        self.tick = 0
        self.prev_action = 0.0
        self.reset_positions: List[Point] = []
        self.reset_angles: List[float] = []
        self.stuck_ticks = 0
        self.fallback_resets = 0

    @property
    def resets(self) -> int:
        return 0 if self.state is None else self.state.reset_count

    def _start_position(self, rng: np.random.Generator) -> Point:
        """Room center, or a uniform free point when a fixed obstacle covers the center."""
        center = self._base_space.center
        if self._base_space.is_free(center):
            return center
        while True:
            candidate = (
                float(rng.uniform(-self._base_space.half_width, self._base_space.half_width)),
                float(rng.uniform(-self._base_space.half_depth, self._base_space.half_depth)),
            )
            if self._base_space.is_free(candidate):
                return candidate

    def reset(self, seed: Optional[int] = None) -> Optional[np.ndarray]:
        """Start a fresh journey; the four random streams are spawned from ``seed``."""
        if seed is not None:
            self.seed = seed
        path_seq, obstacle_seq, heading_seq, action_seq = np.random.SeedSequence(self.seed).spawn(4)
        self.path_rng = np.random.default_rng(path_seq)
        self.obstacle_rng = np.random.default_rng(obstacle_seq)
        self.heading_rng = np.random.default_rng(heading_seq)
        self.action_rng = np.random.default_rng(action_seq)

        start = self._start_position(self.heading_rng)
        heading = float(self.heading_rng.uniform(-math.pi, math.pi))
        self.state = UserState(physical=Pose(start[0], start[1], heading), virtual=Pose(0.0, 0.0, heading))
        self.space = refresh_obstacles(self._base_space, self.scene, self.obstacle_rng, forbidden=start)
        self.walker = VirtualWalker(
            get_path_method(self.walker_config.pathgen),
            self.path_rng,
            step_length=self.walker_config.step_length,
            threshold=self.walker_config.target_threshold,
        )

        self.tick = 0
        self.prev_action = 0.0
        self._prev_gains = GainSet()
        self.reset_positions = []
        self.reset_angles = []
        self.stuck_ticks = 0
        self.fallback_resets = 0
        if self.trajectory is not None:
            self.trajectory.record(0, self.state, self._prev_gains, reset=False)

        logger.debug(
            f"Environment reset (seed {self.seed}, stack {self.stack.label}, "
            f"{len(self.space.obstacles)} obstacles)"
        )
        return self.observation() if self.observe else None

    def observation(self, rays: Optional[np.ndarray] = None) -> np.ndarray:
        return encode_observation(
            self.state,
            self.space,
            self.prev_action,
            rays=rays,
            num_rays=self.policy_config.num_rays,
            spacing_deg=self.policy_config.ray_spacing_deg,
        )

    def sense(self) -> np.ndarray:
        return sense_surroundings(
            self.state.physical,
            self.space,
            self.policy_config.num_rays,
            self.policy_config.ray_spacing_deg,
        )

    def _gains(self, raw_action: Optional[float]) -> GainSet:
        physical = self.state.physical
        if self.rl_slot == "translation":
            translation = decode_action(raw_action, "translation")
        else:
            translation = self.stack.translation_gain(physical, self.space)
        if self.rl_slot == "curvature":
            curvature = decode_action(raw_action, "curvature")
        else:
            curvature = self.stack.curvature_gain(physical, self.space)
        return GainSet(translation=translation, curvature=curvature)

    def _reset_heading(self, state: UserState, raw_action: Optional[float]) -> float:
        if self.rl_slot == "reset":
            return state.physical.heading + decode_action(raw_action, "reset")
        return self.stack.reset_heading(state.physical, self.space)

    def _reset(self, state: UserState, new_heading: float) -> UserState:
        self.reset_positions.append(state.physical.position)
        self.reset_angles.append(degrees_of_turn(state.physical.heading, new_heading))
        logger.debug(
            f"Reset {state.reset_count + 1} at tick {self.tick} "
            f"({state.physical.x:.3f}, {state.physical.y:.3f}): turn {self.reset_angles[-1]:.1f} deg"
        )
        return perform_reset(state, new_heading)

    def _resolve_collision(
        self, event: CollisionEvent, step_length: float, raw_action: Optional[float]
    ) -> UserState:
        """Reset and retry once; a second block falls back to the furthest free direction."""
        state = self._reset(event.state, self._reset_heading(event.state, raw_action))
        result = advance(state, event.gains, self.space, step_length)
        if not isinstance(result, CollisionEvent):
            return result

        fallback = t2f(state.physical, self.space, self.stack.params.t2f.resolution_deg)
        self.fallback_resets += 1
        logger.debug(
            f"Step still blocked after reset at tick {self.tick}; falling back to the furthest free direction"
        )
        state = self._reset(state, fallback)
        result = advance(state, event.gains, self.space, step_length)
        if not isinstance(result, CollisionEvent):
            return result

        self.stuck_ticks += 1
        logger.debug(
            f"Agent stuck at ({state.physical.x:.3f}, {state.physical.y:.3f}) on tick {self.tick}; "
            "virtual step not consumed"
        )
        return state

    def _tick(self, raw_action: Optional[float]) -> Tuple[GainSet, int, Optional[np.ndarray]]:
        heading, step_length = self.walker.plan(self.state.virtual)
        state = turn(self.state, heading)
        self.state = state
        gains = self._gains(raw_action)

        resets_before = state.reset_count
        result = advance(state, gains, self.space, step_length)
        if isinstance(result, CollisionEvent):
            result = self._resolve_collision(result, step_length, raw_action)
        self.state = result
        self.tick += 1

        resets = self.state.reset_count - resets_before
        if self.trajectory is not None:
            self.trajectory.record(self.tick, self.state, gains, reset=resets > 0)
        # Rays for the reward see the layout the step was walked in
        rays = self.sense() if self.observe else None
        if self.tick % self.scene.reposition_interval == 0:
            self.space = refresh_obstacles(
                self._base_space, self.scene, self.obstacle_rng, forbidden=self.state.physical.position
            )
        return gains, resets, rays

    def step(self, raw_action: Optional[float] = None, max_ticks: Optional[int] = None) -> StepResult:
        """Advance one decision (at most ``max_ticks`` ticks); ``done`` marks the end of an epoch."""
        if self.state is None:
            raise RuntimeError("Environment must be reset before stepping")
        if self.rl_slot is not None:
            if raw_action is None:
                raise ValueError(f"Stack {self.stack.label} needs an action for its {self.rl_slot} slot")
            raw_action = clamp_action(raw_action)

        reward = 0.0
        resets = 0
        done = False
        first_angle = len(self.reset_angles)
        ticks = self.policy_config.decision_interval
        if max_ticks is not None:
            ticks = max(1, min(ticks, max_ticks))
        for _ in range(ticks):
            gains, tick_resets, rays = self._tick(raw_action)
            resets += tick_resets
            if self.observe:
                reward += step_reward(
                    gains,
                    self._prev_gains,
                    tick_resets > 0,
                    rays,
                    self.policy_config.rewards,
                    slots=self.reward_slots,
                )
            self._prev_gains = gains
            if self.tick % self.policy_config.episode_length == 0:
                done = True
                break

        obs = None
        if self.observe:
            self.prev_action = raw_action
            obs = self.observation()
        info = {
            "tick": self.tick,
            "resets": resets,
            "reset_angles": self.reset_angles[first_angle:],
            "gains": self._prev_gains,
        }
        return obs, reward, done, info
