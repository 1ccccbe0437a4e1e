"""Step definitions for the policy environment adapter."""

import logging
import math

import numpy as np
import pytest
from pytest_bdd import given, parsers, scenarios, then, when

from config import PolicyConfig, RewardConfig, SceneConfig
from controllers import create_stack
from controllers.controller_factory import ControllerFactory
from geometry import Obstacle, Pose, TrackedSpace, sense_surroundings
from locomotion import GainSet, UserState
from policy import RedirectionEnv, encode_observation, reward_terms
from policy.actions import UnknownSlotError, decode_action
from utils import get_logger

logger = get_logger(__name__)

scenarios("../features/policy.feature")


@given("an empty 15 by 15 metre room")
def empty_room(empty_space, context):
    context["space"] = empty_space


@given(parsers.parse("a user at the center facing {heading:g} degrees"))
def user_at_center(context, heading):
    pose = Pose(0.0, 0.0, math.radians(heading))
    context["state"] = UserState(physical=pose, virtual=Pose(0.0, 0.0, pose.heading))
    context["rays"] = sense_surroundings(pose, context["space"])


@given(
    parsers.parse(
        "a user at ({x:g}, {y:g}) facing {heading:g} degrees in a room with an obstacle at ({ox:g}, {oy:g})"
    )
)
def user_near_obstacle(context, x, y, heading, ox, oy):
    context["scene"] = (x, y, math.radians(heading), ox, oy)


@given(parsers.parse("a heuristic environment with {count:d} obstacles"))
def heuristic_env(context, count):
    context["make_env"] = lambda: RedirectionEnv(
        create_stack("actg", "t2f", "s2c"), scene=SceneConfig(obstacle_count=count)
    )


@given(parsers.parse("a heuristic environment with {count:d} obstacles repositioned every {interval:d} ticks"))
def repositioning_env(context, count, interval):
    context["make_env"] = lambda: RedirectionEnv(
        create_stack("actg", "t2f", "s2c"),
        scene=SceneConfig(obstacle_count=count, reposition_interval=interval),
    )


@given(parsers.parse('a learned "{slot}" environment with episodes of {ticks:d} ticks'))
def learned_env(context, slot, ticks):
    env = RedirectionEnv(
        ControllerFactory.with_rl_slot(slot),
        scene=SceneConfig(obstacle_count=1),
        policy=PolicyConfig(episode_length=ticks),
        seed=8,
    )
    context["observations"] = [env.reset()]
    context["env"] = env


@given(parsers.parse('a heuristic "{reset}" environment with an obstacle between the east wall and the center'))
def wedged_env(context, reset):
    # Obstacle spans x in [6.4, 7.4], leaving a 0.1 m corridor along the east wall
    scene = SceneConfig(obstacles=[(6.9, 0.0)], obstacle_half_side=0.5)
    env = RedirectionEnv(create_stack("ctg", reset, "s2c"), scene=scene, seed=1)
    env.reset()
    context["env"] = env


@when(parsers.parse("I encode the observation with previous action {prev:g}"))
def encode(context, prev):
    context["obs"] = encode_observation(context["state"], context["space"], prev)


@when(parsers.parse('I decode the raw action {raw:g} for the "{slot}" slot'))
def decode(context, raw, slot):
    context["decoded"] = decode_action(raw, slot)


@when(parsers.parse("I decode the raw action {raw:g} for an unknown slot"))
def decode_unknown(context, raw):
    with pytest.raises(UnknownSlotError) as excinfo:
        decode_action(raw, "rotation")
    context["error"] = excinfo.value


def _scaled_observation(scene, scale: float) -> np.ndarray:
    x, y, heading, ox, oy = scene
    space = TrackedSpace(
        half_width=7.5 * scale,
        half_depth=7.5 * scale,
        obstacles=(Obstacle((ox * scale, oy * scale), 1.25 * scale),),
    )
    pose = Pose(x * scale, y * scale, heading)
    state = UserState(physical=pose, virtual=Pose(0.0, 0.0, heading))
    return encode_observation(state, space, 0.4)


@when(parsers.parse('I encode the observation in copies of the room scaled by "{scales}"'))
def encode_scaled(context, scales):
    context["obs"] = _scaled_observation(context["scene"], 1.0)
    context["scaled"] = [_scaled_observation(context["scene"], float(s)) for s in scales.split(",")]


@when(parsers.parse('I score the near-obstacle term for ray ratios "{ratios}"'))
def score_ratios(context, ratios):
    cfg = RewardConfig()
    context["near_terms"] = [
        reward_terms(GainSet(), GainSet(), False, np.array([5.0 * float(r), 5.0]), cfg)["near_obstacle"]
        for r in ratios.split(",")
    ]


@when(parsers.parse('I decode {count:d} evenly spaced raw actions in [-1, 1] for the "{slot}" slot'))
def decode_sweep(context, count, slot):
    context["decoded"] = [decode_action(raw, slot) for raw in np.linspace(-1.0, 1.0, count)]


@when("I score neutral gains without a reset")
def score_neutral(context):
    context["terms"] = reward_terms(GainSet(), GainSet(), False, context["rays"], RewardConfig())


@when("I score neutral gains with a reset")
def score_reset(context):
    context["terms"] = reward_terms(GainSet(), GainSet(), True, context["rays"], RewardConfig())


@when(parsers.parse("I score gains {g_t:g} and {g_c:g} after gains {prev_t:g} and {prev_c:g}"))
def score_gains(context, g_t, g_c, prev_t, prev_c):
    context["terms"] = reward_terms(
        GainSet(translation=g_t, curvature=g_c),
        GainSet(translation=prev_t, curvature=prev_c),
        False,
        context["rays"],
        RewardConfig(),
    )


@when("I score neutral gains in verbatim curvature mode")
def score_verbatim(context):
    cfg = RewardConfig(curvature_penalty_mode="verbatim")
    context["terms"] = reward_terms(GainSet(), GainSet(), False, context["rays"], cfg)


@when(parsers.parse("two environments with seed {seed:d} run {ticks:d} ticks"))
def run_twice(context, seed, ticks):
    envs = []
    for _ in range(2):
        env = context["make_env"]()
        env.reset(seed)
        for _ in range(ticks):
            env.step()
        envs.append(env)
    context["envs"] = envs


@when(parsers.parse("the environment runs {ticks:d} ticks with seed {seed:d}"))
def run_layouts(context, ticks, seed):
    env = context["make_env"]()
    env.reset(seed)
    layouts = [tuple(o.center for o in env.space.obstacles)]
    for _ in range(ticks):
        env.step()
        layouts.append(tuple(o.center for o in env.space.obstacles))
    context["layouts"] = layouts


@when(parsers.parse("the environment is stepped with action {action:g} until done"))
def step_until_done(context, action):
    env = context["env"]
    rewards = []
    done = False
    while not done:
        obs, reward, done, _ = env.step(action)
        context["observations"].append(obs)
        rewards.append(reward)
    context["rewards"] = rewards


@when("the environment is stepped without an action")
def step_without_action(context):
    with pytest.raises(ValueError) as excinfo:
        context["env"].step()
    context["error"] = excinfo.value


@when(parsers.parse("the user standing at ({x:g}, {y:g}) walks one tick toward the east wall"))
def walk_into_wall(context, x, y, caplog):
    env = context["env"]
    env.state = UserState(physical=Pose(x, y, 0.0), virtual=Pose(0.0, 0.0, 0.0))
    env.walker.target = (1000.0, 0.0)
    with caplog.at_level(logging.DEBUG, logger="policy.environment"):
        env.step(max_ticks=1)
    context["records"] = [r for r in caplog.records if r.name == "policy.environment"]


@then(parsers.parse("the observation should have {size:d} entries"))
def observation_size(context, size):
    assert context["obs"].shape == (size,)


@then("the position and center-angle entries should be 0")
def center_entries(context):
    assert np.all(context["obs"][:3] == 0.0), f"Leading entries {context['obs'][:3]}"


@then(parsers.parse("the first ray entry should be {value:g} within {tolerance:g}"))
def first_ray(context, value, tolerance):
    assert context["obs"][3] == pytest.approx(value, abs=tolerance)


@then(parsers.parse("every ray entry should lie within [{low:g}, {high:g}]"))
def rays_normalized(context, low, high):
    rays = context["obs"][3:-1]
    assert np.all((rays >= low) & (rays <= high))


@then(parsers.parse("the previous action entry should be {value:g}"))
def previous_action(context, value):
    assert context["obs"][-1] == value


@then(parsers.parse("the decoded value should be {value:g} within {tolerance:g}"))
def decoded_value(context, value, tolerance):
    assert context["decoded"] == pytest.approx(value, abs=tolerance)


@then(parsers.parse("the decoded turn should be {degrees:g} degrees"))
def decoded_turn(context, degrees):
    turn = context["decoded"]
    assert 0.0 <= turn < 2 * math.pi
    assert math.degrees(turn) == pytest.approx(degrees, abs=1e-9)


@then("an unknown slot error should be raised")
def unknown_slot(context):
    assert isinstance(context["error"], UnknownSlotError)


@then(parsers.parse("every scaled observation should match the unscaled one within {tolerance:g}"))
def scale_invariant(context, tolerance):
    for scaled in context["scaled"]:
        np.testing.assert_allclose(scaled, context["obs"], atol=tolerance)


@then("the near-obstacle terms should strictly increase")
def near_terms_increase(context):
    assert np.all(np.diff(context["near_terms"]) > 0), context["near_terms"]


@then(parsers.parse("the last near-obstacle term should be {value:g}"))
def last_near_term(context, value):
    assert context["near_terms"][-1] == pytest.approx(value, abs=1e-12)


@then("the decoded values should never decrease")
def decoded_monotone(context):
    assert np.all(np.diff(context["decoded"]) >= 0), context["decoded"]


@then(parsers.parse("the near-obstacle term should be {value:g} within {tolerance:g}"))
def near_obstacle_term(context, value, tolerance):
    assert context["terms"]["near_obstacle"] == pytest.approx(value, abs=tolerance)


@then(parsers.parse("the {name:w} term should be {value:g} within {tolerance:g}"))
def term_within(context, name, value, tolerance):
    assert context["terms"][name] == pytest.approx(value, abs=tolerance), f"Terms {context['terms']}"


@then(parsers.parse("the {name:w} term should be {value:g}"))
def term_is(context, name, value):
    assert context["terms"][name] == pytest.approx(value, abs=1e-12), f"Terms {context['terms']}"


@then("both final user states should be identical")
def identical_states(context):
    first, second = context["envs"]
    assert first.state == second.state
    assert first.reset_positions == second.reset_positions
    logger.info(f"{first.resets} resets in both runs")


@then(parsers.parse("every reset angle should lie within [{low:g}, {high:g})"))
def reset_angles(context, low, high):
    for env in context["envs"]:
        assert all(low <= angle < high for angle in env.reset_angles)


@then(parsers.parse("the obstacle layout should change only after ticks {first:d} and {second:d}"))
def layout_changes(context, first, second):
    layouts = context["layouts"]
    changes = [tick for tick in range(1, len(layouts)) if layouts[tick] != layouts[tick - 1]]
    assert changes == [first, second], f"Layout changed after ticks {changes}"


@then(parsers.parse("the environment should have run {ticks:d} ticks"))
def ran_ticks(context, ticks):
    assert context["env"].tick == ticks


@then(parsers.parse("every observation should have {size:d} entries"))
def observation_sizes(context, size):
    assert all(obs.shape == (size,) for obs in context["observations"])


@then(parsers.parse("every reward should be at most {bound:g}"))
def rewards_bounded(context, bound):
    assert max(context["rewards"]) <= bound


@then("a value error should be raised")
def value_error(context):
    assert isinstance(context["error"], ValueError)


@then(parsers.parse("the environment should count {fallbacks:d} fallback reset and {stuck:d} stuck ticks"))
def fallback_counted(context, fallbacks, stuck):
    env = context["env"]
    assert env.fallback_resets == fallbacks
    assert env.stuck_ticks == stuck
    assert env.resets == 2


@then("the user should have moved along the east wall")
def moved_along_wall(context):
    physical = context["env"].state.physical
    assert physical.x == pytest.approx(7.45)
    assert abs(physical.y) > 0.05


@then("the environment should have logged the fallback below warning level")
def fallback_logged_quietly(context):
    records = context["records"]
    assert any("falling back" in r.getMessage() and r.levelno == logging.DEBUG for r in records)
    assert not [r for r in records if r.levelno >= logging.WARNING]
