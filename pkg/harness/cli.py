"""Command-line entry point: ``redwalk train | run | experiment``."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd
from pydantic import ValidationError

from config import config, with_overrides
from controllers import ControllerFactory
from geometry import InvalidQueryError
from harness.experiments import ExperimentSpec, run_experiment, train_model
from harness.journey import run_journey
from harness.model_io import ModelFileError, MissingModelError, load_model
from harness.plots import emit_plots
from locomotion import GainRangeError, TrajectoryLogger
from pathgen import PATH_METHODS
from ppo import ContractError, TrainingDivergedError
from utils import LoggerManager, get_logger

logger = get_logger(__name__)

LIBRARY_ERRORS = (
    ModelFileError,
    MissingModelError,
    InvalidQueryError,
    GainRangeError,
    ContractError,
    TrainingDivergedError,
    ValidationError,
    ValueError,
    OSError,
)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redwalk", description="Redirected walking simulation and RL controllers")
    parser.add_argument("--config", type=Path, help="YAML configuration file (defaults to config/config.yaml)")
    parser.add_argument("--log-level", help="Override the configured log level")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Train a PPO policy for one controller slot")
    train.add_argument("--slot", choices=["translation", "reset", "curvature"], default="curvature")
    train.add_argument("--obstacles", type=int, default=0)
    train.add_argument("--pathgen", choices=sorted(PATH_METHODS), default=None)
    train.add_argument("--seed", type=int, default=None)
    train.add_argument("--env-steps", type=int, default=None, help="Total environment steps across agents")
    train.add_argument("--out", type=Path, required=True, help="Model file to write")

    run = sub.add_parser("run", help="Run one journey with a controller stack")
    run.add_argument("--translation", choices=["ctg", "actg", "fixed", "rl"], default=None)
    run.add_argument("--reset", choices=["2to1", "t2c", "t2f", "rl"], default=None)
    run.add_argument("--curvature", choices=["s2c", "zero", "rl"], default=None)
    run.add_argument("--model", type=Path, default=None)
    run.add_argument("--steps", type=int, default=None)
    run.add_argument("--obstacles", type=int, default=None)
    run.add_argument("--pathgen", choices=sorted(PATH_METHODS), default=None)
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--out", type=Path, default=None, help="Directory for results.csv, trajectory and plots")

    experiment = sub.add_parser("experiment", help="Run a predefined experiment")
    experiment.add_argument("experiment", choices=["prelim", "exp1", "exp2", "exp3", "custom"])
    experiment.add_argument("--steps", type=int, default=None)
    experiment.add_argument("--seeds", type=_int_list, default=None)
    experiment.add_argument("--obstacles", type=_int_list, default=None, help="Comma-separated obstacle counts")
    experiment.add_argument("--pathgens", type=lambda text: [p for p in text.split(",") if p], default=None)
    experiment.add_argument("--stacks", type=lambda text: [s for s in text.split(",") if s], default=None,
                            help="custom: comma-separated translation-reset-curvature keys")
    experiment.add_argument("--model", default=None, help="custom: model file for RL stacks")
    experiment.add_argument("--models", default=None, help="Directory holding (or receiving) model files")
    experiment.add_argument("--train-steps", type=int, default=None)
    experiment.add_argument("--workers", type=int, default=None)
    experiment.add_argument("--out", default=None)
    return parser


def cmd_train(args: argparse.Namespace) -> int:
    harness = config.harness
    path = train_model(
        args.slot,
        args.obstacles,
        args.pathgen or config.walker.pathgen,
        args.out,
        args.env_steps or harness.train_env_steps,
        seed=args.seed,
        progress=harness.progress,
        plot_dir=args.out.parent,
    )
    print(f"Model written to {path}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    harness = config.harness
    stack = ControllerFactory.create_stack(args.translation, args.reset, args.curvature)
    scene = with_overrides(config.scene, obstacle_count=args.obstacles)
    walker = with_overrides(config.walker, pathgen=args.pathgen)
    params = load_model(args.model) if args.model else None
    steps = args.steps if args.steps is not None else harness.journey_steps
    trajectory = TrajectoryLogger(min(harness.trajectory_steps, steps)) if args.out else None

    metrics = run_journey(
        stack,
        steps,
        args.seed,
        scene=scene,
        walker=walker,
        params=params,
        trajectory=trajectory,
        progress=harness.progress,
    )
    print(
        f"{stack.label}: {metrics.resets} resets over {steps} steps "
        f"({metrics.resets_per_km:.2f} per km, mean reset angle {metrics.mean_reset_angle:.1f} deg)"
    )

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        pd.DataFrame([{**metrics.to_row(), "obstacles": scene.obstacle_count, "pathgen": walker.pathgen}]).to_csv(
            args.out / "results.csv", index=False
        )
        name = stack.key
        trajectory.write_csv(args.out / "gains" / f"{name}.csv")
        emit_plots(
            args.out,
            trajectories={name: trajectory.to_frame()},
            half_width=scene.half_width,
            half_depth=scene.half_depth,
        )
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_config(
        args.experiment,
        journey_steps=args.steps,
        seeds=args.seeds,
        obstacle_counts=args.obstacles,
        path_methods=args.pathgens,
        stacks=args.stacks,
        model=args.model,
        models_dir=args.models,
        train_env_steps=args.train_steps,
        workers=args.workers,
        output_dir=args.out,
    )
    report = run_experiment(spec)
    if not report.summary.empty:
        print(report.summary[["condition", "mean_resets", "sd_resets", "mean_resets_per_km"]].to_string(index=False))
    print(f"{len(report.results)} journeys; files written to {spec.output_dir}")
    return 0


COMMANDS = {"train": cmd_train, "run": cmd_run, "experiment": cmd_experiment}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.config:
        config.load(args.config)
    if args.config or args.log_level:
        LoggerManager.configure(config.logging, level=args.log_level)

    try:
        return COMMANDS[args.command](args)
    except LIBRARY_ERRORS as e:
        logger.error(f"redwalk {args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
