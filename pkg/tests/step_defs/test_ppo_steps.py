"""Step definitions for the PPO actor-critic tests."""

import math

import numpy as np
import pandas as pd
import pytest
from pytest_bdd import given, parsers, scenarios, then, when

from config import PolicyConfig, PPOConfig
from controllers.controller_factory import ControllerFactory
from policy import RedirectionEnv
from ppo import (
    TRAINING_LOG_COLUMNS,
    ContractError,
    MiniBatch,
    PPOTrainer,
    RolloutBuffer,
    TrainingDivergedError,
    clipped_policy_loss,
    combined_loss,
    combined_loss_and_grads,
    copy_params,
    entropy,
    flatten,
    forward,
    gae,
    init_params,
    linear_decay,
    log_prob,
    nstep_advantage,
    sample_action,
    sample_gaussian,
    unflatten,
    update,
)
from ppo.trainer import ADVANTAGE_NORM_EPS
from utils import get_logger

logger = get_logger(__name__)

scenarios("../features/ppo.feature")

SMALL_OBS = 5


def _floats(text: str) -> np.ndarray:
    return np.array([float(item) for item in text.split(",")])


def _residual_sum(rewards, values, bootstrap, gamma, lambd):
    next_values = np.append(values[1:], bootstrap)
    deltas = rewards + gamma * next_values - values
    return np.array(
        [
            sum((gamma * lambd) ** offset * deltas[t + offset] for offset in range(len(deltas) - t))
            for t in range(len(deltas))
        ]
    )


def _small_hyper(**overrides) -> PPOConfig:
    settings = dict(agents=1, batch_size=4, buffer_size=8, num_epoch=2, time_horizon=8, seed=3)
    settings.update(overrides)
    return PPOConfig(**settings)


# ---------------------------------------------------------------- given


@given(parsers.parse("a fresh actor-critic for {inputs:d} inputs"))
def fresh_network(context, inputs):
    context["params"] = init_params(inputs, 1, rng=np.random.default_rng(0))
    context["inputs"] = inputs


@given(parsers.parse("a random actor-critic for {inputs:d} inputs with seed {seed:d}"))
def random_network(context, inputs, seed):
    context["params"] = init_params(inputs, 1, hidden_units=32, rng=np.random.default_rng(seed), zero_heads=False)
    context["inputs"] = inputs


@given("a small random actor-critic and minibatch")
def small_random_network(context):
    rng = np.random.default_rng(42)
    params = init_params(SMALL_OBS, 1, hidden_units=4, num_layers=2, rng=rng, zero_heads=False, log_std_init=-0.3)
    params["W_mu"] = rng.normal(0.0, 0.5, params["W_mu"].shape)
    params["W_v"] = rng.normal(0.0, 0.5, params["W_v"].shape)
    params["b_v"] = rng.normal(0.0, 0.5, 1)
    n = 8
    obs = rng.normal(0.0, 1.0, (n, SMALL_OBS))
    mean, log_std, _ = forward(params, obs)
    actions = mean + np.exp(log_std) * rng.standard_normal((n, 1))
    logp = log_prob(actions, mean, log_std)
    context["params"] = params
    context["batch"] = MiniBatch(
        obs=obs,
        actions=actions,
        # Ratios stay well inside the clip range
        log_probs_old=logp + rng.uniform(-0.05, 0.05, n),
        advantages=rng.normal(0.0, 1.0, n),
        value_targets=rng.normal(0.0, 1.0, n),
    )
    context["logp"] = logp


def _build_buffer(params, rewards) -> RolloutBuffer:
    buffer = RolloutBuffer(1)
    rng = np.random.default_rng(2)
    for reward in rewards:
        obs = rng.normal(0.0, 1.0, SMALL_OBS)
        mean, log_std, value = forward(params, obs)
        action = sample_gaussian(mean, log_std, rng)
        buffer.add(0, obs, action, float(log_prob(action, mean, log_std)), reward, value, False)
    return buffer


def _filled_buffer(context, rewards):
    params = init_params(SMALL_OBS, 1, hidden_units=4, num_layers=1, rng=np.random.default_rng(1))
    context.update(
        params=params, rewards=rewards, buffer=_build_buffer(params, rewards), hyper=_small_hyper()
    )


@given("a small fresh actor-critic and a buffer of zero rewards")
def zero_reward_buffer(context):
    _filled_buffer(context, [0.0] * 8)


@given("a small fresh actor-critic and a buffer of random rewards")
def random_reward_buffer(context):
    _filled_buffer(context, list(np.random.default_rng(9).normal(0.0, 1.0, 8)))


@given(parsers.parse("a tiny PPO configuration with {agents:d} agents and a buffer of {size:d} decisions"))
def tiny_config(context, agents, size):
    context["hyper"] = PPOConfig(
        agents=agents,
        batch_size=size // 2,
        buffer_size=size,
        time_horizon=8,
        max_env_steps=size,
        hidden_units=8,
        num_layers=1,
        num_epoch=1,
        seed=5,
    )
    context["env_factory"] = lambda stack, seed: RedirectionEnv(
        stack, policy=PolicyConfig(episode_length=20), seed=seed
    )


# ----------------------------------------------------------------- when


@when(parsers.parse("I perturb {count:d} random observations by up to {radius:g} with seed {seed:d}"))
def perturb_observations(context, count, radius, seed):
    rng = np.random.default_rng(seed)
    params = context["params"]
    samples = []
    for _ in range(count):
        obs = rng.uniform(-1.0, 1.0, context["inputs"])
        delta = rng.normal(size=context["inputs"])
        delta *= radius * rng.uniform() / np.linalg.norm(delta)
        mean_a, _, value_a = forward(params, obs)
        mean_b, _, value_b = forward(params, obs + delta)
        samples.append((np.linalg.norm(delta), np.linalg.norm(mean_b - mean_a), abs(float(value_b - value_a))))
    context["perturbations"] = samples


@when(parsers.parse("I evaluate it on {count:d} random observations"))
def evaluate_network(context, count):
    obs = np.random.default_rng(3).uniform(-1.0, 1.0, (count, context["inputs"]))
    context["mean"], context["log_std"], context["value"] = forward(context["params"], obs)


@when(parsers.parse("I draw {count:d} samples with mean {mean:g} and standard deviation {std:g}"))
def draw_samples(context, count, mean, std):
    rng = np.random.default_rng(11)
    mean_vec = np.full((count, 1), mean)
    context["samples"] = sample_gaussian(mean_vec, np.array([math.log(std)]), rng)[:, 0]


@when(parsers.parse(
    "I sample an action with mean {mean:g} and log standard deviation {log_std:g} using seed {seed:d}"
))
def sample_bounded(context, mean, log_std, seed):
    context["mean"], context["log_std"] = np.array([mean]), np.array([log_std])
    context["drawn"] = sample_action(context["mean"], context["log_std"], np.random.default_rng(seed))


@when(parsers.parse("I sample an action with mean {mean:g} and a vanishing spread using seed {seed:d}"))
def sample_degenerate(context, mean, seed):
    context["drawn"] = sample_action(np.array([mean]), np.array([-np.inf]), np.random.default_rng(seed))


@when(parsers.parse('I compute GAE for rewards "{rewards}" and values "{values}" with bootstrap {bootstrap:g}'))
def gae_literal(context, rewards, values, bootstrap):
    try:
        context["advantages"] = gae(_floats(rewards), _floats(values), bootstrap, 0.99, 0.95)
        context["error"] = None
    except ContractError as e:
        context["error"] = e


@when(parsers.parse("I compute GAE for {steps:d} random steps with gamma {gamma:g} and lambda {lambd:g}"))
def gae_random(context, steps, gamma, lambd):
    rng = np.random.default_rng(steps)
    rewards = rng.normal(0.0, 1.0, steps)
    values = rng.normal(0.0, 1.0, steps)
    bootstrap = float(rng.normal())
    context.update(rewards=rewards, values=values, bootstrap=bootstrap, gamma=gamma, lambd=lambd)
    context["advantages"] = gae(rewards, values, bootstrap, gamma, lambd)


@when(parsers.parse("I evaluate the clipped objective for ratio {ratio:g} and advantage {advantage:g}"))
def clipped_objective(context, ratio, advantage):
    context["objective"] = clipped_policy_loss(np.log([ratio]), np.zeros(1), np.array([advantage]), 0.2)


@when("I compute the analytic gradient of the combined objective")
def analytic_gradient(context):
    _, grads, _ = combined_loss_and_grads(context["params"], context["batch"], 0.2, 0.5, 0.005)
    context["grads"] = grads


@when("I compute the unclipped policy gradient at the sampling policy")
def unclipped_gradient(context):
    batch = context["batch"]
    batch.log_probs_old = context["logp"].copy()
    _, grads, _ = combined_loss_and_grads(context["params"], batch, 1e9, 0.0, 0.0)
    context["grads"] = grads


@when("I run one PPO update")
def run_update(context):
    context["before"] = copy_params(context["params"])
    context["after"], _ = update(context["params"], context["buffer"], context["hyper"], [0.0])


@when(parsers.parse("I run one PPO update with plain gradient ascent at learning rate {rate:g}"))
def run_sgd_update(context, rate):
    hyper = _small_hyper(optimizer="sgd", num_epoch=1, batch_size=8)
    buffer = _build_buffer(context["params"], context["rewards"])
    batch = buffer.compute([0.5], hyper.gamma, hyper.lambd, hyper.time_horizon)
    advantages = (batch.advantages - batch.advantages.mean()) / (batch.advantages.std() + ADVANTAGE_NORM_EPS)
    _, grads, _ = combined_loss_and_grads(
        context["params"],
        batch.minibatch(np.arange(len(batch)), advantages),
        hyper.epsilon,
        hyper.value_coefficient,
        hyper.entropy_coefficient,
    )
    context["expected"] = flatten(context["params"]) + rate * flatten(grads)
    context["after"], _ = update(context["params"], context["buffer"], hyper, [0.5], learning_rate=rate)


@when("I run the same PPO update twice")
def run_update_twice(context):
    results = []
    for _ in range(2):
        buffer = _build_buffer(context["params"], context["rewards"])
        params, _ = update(
            copy_params(context["params"]), buffer, context["hyper"], [0.5], rng=np.random.default_rng(7)
        )
        results.append(params)
    context["results"] = results


@when("the first hidden bias becomes NaN")
def corrupt_params(context):
    context["params"]["b0"][0] = np.nan


@when(parsers.parse('I train a "{slot}" policy for {steps:d} environment steps'))
def train_policy(context, slot, steps):
    assert context["hyper"].max_env_steps == steps
    trainer = PPOTrainer(context["env_factory"], ControllerFactory.with_rl_slot(slot), context["hyper"])
    trainer.train()
    context["trainer"] = trainer


@when("I try to train the heuristic stack")
def train_heuristic(context):
    with pytest.raises(ValueError) as excinfo:
        PPOTrainer(context["env_factory"], ControllerFactory.heuristic(), context["hyper"])
    context["error"] = excinfo.value


# ----------------------------------------------------------------- then


@then("the mean and value changes should stay within the product of the layer spectral norms")
def lipschitz_bound(context):
    params = context["params"]
    # tanh is 1-Lipschitz, so each head is bounded by the product of its weight norms
    trunk = np.linalg.norm(params["W0"], 2) * np.linalg.norm(params["W1"], 2)
    mean_bound = trunk * np.linalg.norm(params["W_mu"], 2)
    value_bound = trunk * np.linalg.norm(params["W_v"], 2)
    for size, mean_change, value_change in context["perturbations"]:
        assert mean_change <= mean_bound * size + 1e-12
        assert value_change <= value_bound * size + 1e-12


@then("every action mean should be 0")
def means_zero(context):
    assert np.all(context["mean"] == 0.0)


@then("every value should be 0")
def values_zero(context):
    assert np.all(context["value"] == 0.0)


@then("the log standard deviation should be 0")
def log_std_zero(context):
    assert np.all(context["log_std"] == 0.0)


@then(parsers.parse("the log density of 0 under a standard normal should be {expected:g}"))
def standard_log_density(expected):
    assert float(log_prob(np.zeros(1), np.zeros(1), np.zeros(1))) == pytest.approx(expected, abs=1e-12)


@then(parsers.parse("the entropy of a standard normal should be {expected:g}"))
def standard_entropy(expected):
    assert entropy(np.zeros(1)) == pytest.approx(expected, abs=1e-12)


@then(parsers.parse("the sample mean should be {expected:g} within {tolerance:g}"))
def sample_mean(context, expected, tolerance):
    assert context["samples"].mean() == pytest.approx(expected, abs=tolerance)


@then(parsers.parse("the sample standard deviation should be {expected:g} within {tolerance:g}"))
def sample_std(context, expected, tolerance):
    assert context["samples"].std() == pytest.approx(expected, abs=tolerance)


@then(parsers.parse("the action should be {expected:g}"))
def action_is(context, expected):
    assert float(context["drawn"].action[0]) == pytest.approx(expected, abs=1e-15)


@then("the pre-clamp sample should exceed 1")
def sample_unclamped(context):
    assert context["drawn"].sample[0] > 1.0, f"Sample {context['drawn'].sample}"


@then(parsers.parse("the pre-clamp sample should be {expected:g}"))
def sample_is(context, expected):
    assert context["drawn"].sample[0] == pytest.approx(expected, abs=1e-15)


@then("the log density should be that of the pre-clamp sample")
def density_of_sample(context):
    drawn = context["drawn"]
    assert float(drawn.log_prob) == pytest.approx(float(log_prob(drawn.sample, context["mean"], context["log_std"])))
    assert float(drawn.log_prob) != pytest.approx(float(log_prob(drawn.action, context["mean"], context["log_std"])))


@then(parsers.parse('the advantages should be "{expected}"'))
def advantages_are(context, expected):
    np.testing.assert_allclose(context["advantages"], _floats(expected), atol=1e-12)


@then(parsers.parse("the advantages should match the explicit residual sum within {tolerance:g}"))
def advantages_match_sum(context, tolerance):
    expected = _residual_sum(
        context["rewards"], context["values"], context["bootstrap"], context["gamma"], context["lambd"]
    )
    np.testing.assert_allclose(context["advantages"], expected, atol=tolerance, rtol=0)


@then(parsers.parse("the advantages should equal the n-step advantages within {tolerance:g}"))
def advantages_nstep(context, tolerance):
    expected = nstep_advantage(context["rewards"], context["values"], context["bootstrap"], context["gamma"])
    np.testing.assert_allclose(context["advantages"], expected, atol=tolerance, rtol=0)


@then(parsers.parse("the advantages should equal the one-step residuals within {tolerance:g}"))
def advantages_one_step(context, tolerance):
    values = context["values"]
    next_values = np.append(values[1:], context["bootstrap"])
    expected = context["rewards"] + context["gamma"] * next_values - values
    np.testing.assert_allclose(context["advantages"], expected, atol=tolerance, rtol=0)


@then("a contract error should be raised")
def contract_error(context):
    assert isinstance(context["error"], ContractError)


@then(parsers.parse("the clipped objective should be {expected:g}"))
def clipped_value(context, expected):
    assert context["objective"] == pytest.approx(expected, abs=1e-12)


@then(parsers.parse(
    'the combined objective of policy term {policy:g}, values "{pred}" against "{target}" '
    "and entropy {ent:g} should be {expected:g}"
))
def combined_value(policy, pred, target, ent, expected):
    value = combined_loss(policy, _floats(pred), _floats(target), ent, 0.5, 0.01)
    assert value == pytest.approx(expected, abs=1e-12)


@then("every gradient entry should match a central finite difference")
def finite_differences(context):
    params, batch = context["params"], context["batch"]
    vector = flatten(params)
    analytic = flatten(context["grads"])
    step = 1e-6
    numeric = np.empty_like(vector)
    for index in range(vector.size):
        shifted = vector.copy()
        shifted[index] += step
        upper, _, _ = combined_loss_and_grads(unflatten(shifted, params), batch, 0.2, 0.5, 0.005)
        shifted[index] -= 2 * step
        lower, _, _ = combined_loss_and_grads(unflatten(shifted, params), batch, 0.2, 0.5, 0.005)
        numeric[index] = (upper - lower) / (2 * step)
    worst = np.max(np.abs(numeric - analytic))
    logger.info(f"Largest gradient discrepancy {worst:.3e} over {vector.size} parameters")
    np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-7)


@then("the mean-head bias and log-std gradients should equal the advantage-weighted scores")
def score_function(context):
    params, batch, grads = context["params"], context["batch"], context["grads"]
    mean, log_std, _ = forward(params, batch.obs)
    sigma2 = np.exp(2 * log_std)
    diff = batch.actions - mean
    weights = batch.advantages[:, None]
    expected_b_mu = np.mean(weights * diff / sigma2 * (1.0 - mean**2), axis=0)
    expected_log_std = np.mean(weights * (diff**2 / sigma2 - 1.0), axis=0)
    np.testing.assert_allclose(grads["b_mu"], expected_b_mu, atol=1e-12)
    np.testing.assert_allclose(grads["log_std"], expected_log_std, atol=1e-12)


@then("only the log standard deviation should have changed")
def only_log_std(context):
    before, after = context["before"], context["after"]
    for name in before:
        if name == "log_std":
            assert np.all(after[name] > before[name]), "Entropy bonus should raise log_std"
        else:
            np.testing.assert_array_equal(after[name], before[name], err_msg=f"Block {name} moved")


@then("the buffer should be empty")
def buffer_empty(context):
    assert len(context["buffer"]) == 0


@then("every parameter should have moved by the learning rate times the full-batch gradient")
def sgd_step(context):
    np.testing.assert_allclose(flatten(context["after"]), context["expected"], rtol=1e-9, atol=1e-12)
    assert len(context["buffer"]) == 0


@then("both updates should give identical parameters")
def identical_updates(context):
    first, second = context["results"]
    for name in first:
        np.testing.assert_array_equal(first[name], second[name])
    assert not np.array_equal(flatten(first), flatten(context["params"]))


@then(parsers.parse('segments of dones "{dones}" with horizon {horizon:d} should be "{expected}"'))
def segments_are(dones, horizon, expected):
    flags = [item == "1" for item in dones.split(",")]
    bounds = [tuple(int(x) for x in pair.split("-")) for pair in expected.split(",")]
    assert RolloutBuffer.segments(flags, horizon) == bounds


@then(parsers.parse("the learning rate at {steps:d} of {total:d} steps should be {expected:g}"))
def learning_rate(steps, total, expected):
    assert linear_decay(3e-4, steps, total) == pytest.approx(expected, rel=1e-12)


@then(parsers.parse('evaluating the network should raise a training diverged error naming "{where}"'))
def diverged(context, where):
    with pytest.raises(TrainingDivergedError) as excinfo:
        forward(context["params"], np.zeros(context["inputs"]))
    assert excinfo.value.where == f"network {where}"
    assert excinfo.value.block == "b0"


@then(parsers.parse("exactly {count:d} update should have run"))
def updates_run(context, count):
    trainer = context["trainer"]
    assert trainer.updates == count
    assert trainer.env_steps == context["hyper"].max_env_steps


@then(parsers.parse("the training log should have {rows:d} row with the standard columns"))
def training_log(context, rows, tmp_path):
    path = context["trainer"].write_training_log(tmp_path / "model.training.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == TRAINING_LOG_COLUMNS
    assert len(frame) == rows
    assert np.all(np.isfinite(frame.to_numpy()))


@then("a value error should be raised")
def value_error(context):
    assert isinstance(context["error"], ValueError)
