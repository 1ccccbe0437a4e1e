"""PPO package initialization."""

from .advantages import gae, nstep_advantage
from .buffer import RolloutBatch, RolloutBuffer
from .distributions import SampledAction, entropy, log_prob, sample_action, sample_gaussian
from .errors import ContractError, TrainingDivergedError
from .losses import MiniBatch, clipped_policy_loss, combined_loss, combined_loss_and_grads
from .network import (
    LOG_STD_MAX,
    LOG_STD_MIN,
    NetworkParams,
    act_dim,
    copy_params,
    flatten,
    forward,
    init_params,
    layer_shapes,
    obs_dim,
    param_names,
    unflatten,
)
from .optimizer import SGD, Adam, create_optimizer, linear_decay
from .trainer import TRAINING_LOG_COLUMNS, PPOTrainer, train, update

__all__ = [
    "LOG_STD_MAX",
    "LOG_STD_MIN",
    "TRAINING_LOG_COLUMNS",
    "SGD",
    "Adam",
    "ContractError",
    "MiniBatch",
    "NetworkParams",
    "PPOTrainer",
    "RolloutBatch",
    "RolloutBuffer",
    "SampledAction",
    "TrainingDivergedError",
    "act_dim",
    "clipped_policy_loss",
    "combined_loss",
    "combined_loss_and_grads",
    "copy_params",
    "create_optimizer",
    "entropy",
    "flatten",
    "forward",
    "gae",
    "init_params",
    "layer_shapes",
    "linear_decay",
    "log_prob",
    "nstep_advantage",
    "obs_dim",
    "param_names",
    "sample_action",
    "sample_gaussian",
    "train",
    "unflatten",
    "update",
]
