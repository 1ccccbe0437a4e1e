"""Experiment definitions, condition grids, journey fan-out and result aggregation."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator
from tqdm import tqdm

from config import (
    ControllerConfig,
    PolicyConfig,
    SceneConfig,
    WalkerConfig,
    config,
    with_overrides,
)
from controllers import ControllerFactory, ControllerStack
from harness.journey import run_journey
from harness.model_io import MissingModelError, load_model, save_model
from harness.plots import emit_plots, plot_training_curve
from locomotion import TrajectoryLogger
from pathgen import PATH_METHODS
from policy import RedirectionEnv
from policy.actions import CURVATURE_SCALE, RESET_SCALE_DEG, TRANSLATION_OFFSET, TRANSLATION_SCALE
from ppo import PPOTrainer
from utils import PlotHelper, get_logger

logger = get_logger(__name__)

ExperimentId = Literal["prelim", "exp1", "exp2", "exp3", "custom"]

PRELIM_COMBOS = [("ctg", "t2c"), ("ctg", "t2f"), ("actg", "t2c"), ("actg", "t2f")]
EXP3_PATH_METHODS = ["office", "exp_small", "exp_large", "long_walk"]
HEURISTIC = "heuristic"

RESULT_COLUMNS = [
    "experiment",
    "condition",
    "controller",
    "translation",
    "reset",
    "curvature",
    "obstacles",
    "pathgen",
    "model",
    "seed",
    "steps",
    "resets",
    "resets_per_km",
    "distance_virtual",
    "distance_physical",
    "mean_reset_angle",
    "sd_reset_angle",
    "decision_time_ms",
    "stuck_ticks",
    "fallback_resets",
]

SUMMARY_COLUMNS = [
    "condition",
    "controller",
    "obstacles",
    "pathgen",
    "seeds",
    "mean_resets",
    "sd_resets",
    "mean_resets_per_km",
    "sd_resets_per_km",
    "mean_reset_angle",
    "sd_reset_angle",
    "relative_increase_pct",
    "ratio_to_heuristic",
    "decision_time_ms",
]


class ExperimentSpec(BaseModel):
    """What to run: conditions are derived from ``experiment`` plus the grids below."""

    experiment: ExperimentId
    journey_steps: int = Field(default=100_000, gt=0)
    seeds: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5], min_length=1)
    obstacle_counts: List[int] = Field(default_factory=lambda: [0, 1, 2, 3])
    path_methods: List[str] = Field(default_factory=lambda: list(EXP3_PATH_METHODS))
    stacks: List[str] = Field(default_factory=list)
    model: Optional[str] = None
    output_dir: str = "results"
    models_dir: str = ""
    train_env_steps: int = Field(default=2_000_000, gt=0)
    train_missing: bool = True
    trajectory_steps: int = Field(default=1000, ge=0)
    workers: int = Field(default=1, gt=0)
    progress: bool = False

    @field_validator("obstacle_counts")
    @classmethod
    def _non_negative(cls, counts: List[int]) -> List[int]:
        if any(count < 0 for count in counts):
            raise ValueError("obstacle counts must be >= 0")
        return counts

    @field_validator("path_methods")
    @classmethod
    def _known_methods(cls, methods: List[str]) -> List[str]:
        unknown = [method for method in methods if method not in PATH_METHODS]
        if unknown:
            raise ValueError(f"unknown path methods: {', '.join(unknown)}")
        return methods

    @classmethod
    def from_config(cls, experiment: ExperimentId, **overrides: Any) -> "ExperimentSpec":
        """Defaults from the ``harness`` config section, then non-None ``overrides``."""
        harness = config.harness
        values: Dict[str, Any] = {
            "experiment": experiment,
            "journey_steps": harness.journey_steps,
            "seeds": harness.seeds,
            "output_dir": harness.output_dir,
            "models_dir": harness.models_dir,
            "train_env_steps": harness.train_env_steps,
            "trajectory_steps": harness.trajectory_steps,
            "workers": harness.workers,
            "progress": harness.progress,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls.model_validate(values)

    @property
    def models_path(self) -> Path:
        return Path(self.models_dir) if self.models_dir else Path(self.output_dir) / "models"


@dataclass(frozen=True)
class Condition:
    """One cell of an experiment grid."""

    controller: str
    translation: str
    reset: str
    curvature: str
    obstacles: int
    pathgen: str
    model: Optional[str] = None

    @property
    def name(self) -> str:
        return f"{self.controller}_o{self.obstacles}_{self.pathgen}"

    @property
    def stack_key(self) -> str:
        return f"{self.translation}-{self.reset}-{self.curvature}"


@dataclass
class ExperimentReport:
    results: pd.DataFrame
    summary: pd.DataFrame
    files: List[Path] = field(default_factory=list)


def model_key(slot: str, obstacles: int, pathgen: str) -> str:
    return f"rl_{slot}_o{obstacles}_{pathgen}"


def _heuristic(obstacles: int, pathgen: str) -> Condition:
    return Condition(HEURISTIC, "actg", "t2f", "s2c", obstacles, pathgen)


def _rl(controller: str, slot: str, obstacles: int, pathgen: str, model: str) -> Condition:
    choices = {"translation": "actg", "reset": "t2f", "curvature": "s2c", slot: "rl"}
    return Condition(
        controller, choices["translation"], choices["reset"], choices["curvature"], obstacles, pathgen, model
    )


def build_conditions(spec: ExperimentSpec) -> List[Condition]:
    """Condition grid of each experiment, in reporting order."""
    conditions: List[Condition] = []
    non_retrained = model_key("curvature", 0, "random")

    if spec.experiment == "prelim":
        for obstacles in spec.obstacle_counts:
            for translation, reset in PRELIM_COMBOS:
                conditions.append(
                    Condition(f"{translation}-{reset}-s2c", translation, reset, "s2c", obstacles, "random")
                )
    elif spec.experiment == "exp1":
        conditions.append(_heuristic(0, "random"))
        for slot in ("translation", "reset", "curvature"):
            conditions.append(_rl(f"rl_{slot}", slot, 0, "random", model_key(slot, 0, "random")))
    elif spec.experiment == "exp2":
        for obstacles in spec.obstacle_counts:
            conditions.append(_heuristic(obstacles, "random"))
            conditions.append(_rl("non_retrained", "curvature", obstacles, "random", non_retrained))
            conditions.append(
                _rl("retrained", "curvature", obstacles, "random", model_key("curvature", obstacles, "random"))
            )
    elif spec.experiment == "exp3":
        for pathgen in spec.path_methods:
            conditions.append(_heuristic(0, pathgen))
            conditions.append(_rl("non_retrained", "curvature", 0, pathgen, non_retrained))
            conditions.append(_rl("retrained", "curvature", 0, pathgen, model_key("curvature", 0, pathgen)))
    else:
        pathgens = spec.path_methods if spec.path_methods else ["random"]
        for key in spec.stacks:
            translation, reset, curvature = key.lower().split("-")
            controller = HEURISTIC if key == "actg-t2f-s2c" else key
            for obstacles in spec.obstacle_counts:
                for pathgen in pathgens:
                    model = spec.model if "rl" in (translation, reset, curvature) else None
                    conditions.append(Condition(controller, translation, reset, curvature, obstacles, pathgen, model))
    return conditions


def _scene(obstacles: int) -> SceneConfig:
    return with_overrides(config.scene, obstacle_count=obstacles)


def _walker(pathgen: str) -> WalkerConfig:
    return with_overrides(config.walker, pathgen=pathgen)


def model_path(spec: ExperimentSpec, model: str) -> Path:
    """Model keys resolve inside the models directory; anything else is a file path."""
    if model.startswith("rl_") and not model.endswith(".yaml"):
        return spec.models_path / f"{model}.yaml"
    return Path(model)


def _trainable(spec: ExperimentSpec) -> set:
    """Model keys this experiment is allowed to produce itself."""
    if spec.experiment == "exp1":
        return {model_key(slot, 0, "random") for slot in ("translation", "reset", "curvature")}
    if spec.experiment == "exp2":
        return {model_key("curvature", n, "random") for n in spec.obstacle_counts if n > 0}
    if spec.experiment == "exp3":
        return {model_key("curvature", 0, pathgen) for pathgen in spec.path_methods if pathgen != "random"}
    return set()


def normalization_constants(scene: SceneConfig) -> Dict[str, float]:
    return {
        "half_width": scene.half_width,
        "half_depth": scene.half_depth,
        "diagonal": float(np.hypot(2 * scene.half_width, 2 * scene.half_depth)),
        "translation_scale": TRANSLATION_SCALE,
        "translation_offset": TRANSLATION_OFFSET,
        "curvature_scale": CURVATURE_SCALE,
        "reset_scale_deg": RESET_SCALE_DEG,
    }


def train_model(
    slot: str,
    obstacles: int,
    pathgen: str,
    out: Path,
    env_steps: int,
    seed: Optional[int] = None,
    progress: bool = False,
    plot_dir: Optional[Path] = None,
) -> Path:
    """Train one RL slot and write the model document, its training CSV and training curve."""
    hyper = with_overrides(config.ppo, max_env_steps=env_steps, seed=seed)
    scene = _scene(obstacles)
    walker = _walker(pathgen)
    policy = config.policy
    stack = ControllerFactory.with_rl_slot(slot)

    def env_factory(env_stack: ControllerStack, env_seed: int) -> RedirectionEnv:
        return RedirectionEnv(env_stack, scene=scene, walker=walker, policy=policy, seed=env_seed)

    trainer = PPOTrainer(env_factory, stack, hyper, progress=progress)
    params = trainer.train()
    save_model(
        params,
        out,
        slot=slot,
        hyperparameters=hyper.model_dump(mode="json"),
        normalization=normalization_constants(scene),
        seed=hyper.seed,
    )
    training_csv = trainer.write_training_log(out.with_suffix(".training.csv"))
    plot_training_curve(trainer.training_frame(), PlotHelper(plot_dir or out.parent), out.stem)
    logger.info(f"Model {out} trained for {trainer.env_steps} env steps; log {training_csv}")
    return out


def ensure_models(spec: ExperimentSpec, conditions: List[Condition]) -> Dict[str, Path]:
    """Resolve every model the conditions need, training the ones this experiment owns."""
    trainable = _trainable(spec)
    paths: Dict[str, Path] = {}
    for condition in conditions:
        if condition.model is None or condition.model in paths:
            continue
        path = model_path(spec, condition.model)
        if not path.exists():
            if condition.model in trainable and spec.train_missing:
                slot = condition.model.split("_")[1]
                train_model(
                    slot,
                    condition.obstacles if spec.experiment == "exp2" else 0,
                    condition.pathgen,
                    path,
                    spec.train_env_steps,
                    progress=spec.progress,
                    plot_dir=Path(spec.output_dir),
                )
            else:
                raise MissingModelError(
                    f"Condition {condition.name} needs model {path}; train it first "
                    f"(e.g. run exp1 for the non-retrained curvature model)"
                )
        paths[condition.model] = path
    return paths


@lru_cache(maxsize=16)
def _cached_model(path: str):
    return load_model(path)


def _run_task(task: Tuple) -> Tuple[Dict[str, Any], Optional[pd.DataFrame]]:
    """One (condition, seed) journey; top-level so process pools can pickle it."""
    experiment, condition, seed, steps, scene, walker, policy, params_cfg, path, trajectory_steps = task
    stack = ControllerFactory.create_stack(condition.translation, condition.reset, condition.curvature, params_cfg)
    params = _cached_model(str(path)) if path is not None else None
    trajectory = TrajectoryLogger(trajectory_steps) if trajectory_steps else None

    metrics = run_journey(
        stack, steps, seed, scene=scene, walker=walker, policy=policy, params=params, trajectory=trajectory
    )
    row = {
        "experiment": experiment,
        "condition": condition.name,
        "translation": condition.translation,
        "reset": condition.reset,
        "curvature": condition.curvature,
        "obstacles": condition.obstacles,
        "pathgen": condition.pathgen,
        "model": condition.model or "",
        **metrics.to_row(),
        "controller": condition.controller,
    }
    return row, trajectory.to_frame() if trajectory is not None else None


def summarize(results: pd.DataFrame) -> pd.DataFrame:
    """Per-condition mean and SD over seeds, relative increase over each controller's empty room,
    and the ratio to the heuristic controller under the same obstacles and path method."""
    if results.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)

    grouped = results.groupby("condition", sort=False)
    summary = grouped.agg(
        controller=("controller", "first"),
        obstacles=("obstacles", "first"),
        pathgen=("pathgen", "first"),
        seeds=("seed", "count"),
        mean_resets=("resets", "mean"),
        sd_resets=("resets", "std"),
        mean_resets_per_km=("resets_per_km", "mean"),
        sd_resets_per_km=("resets_per_km", "std"),
        mean_reset_angle=("mean_reset_angle", "mean"),
        sd_reset_angle=("sd_reset_angle", "mean"),
        decision_time_ms=("decision_time_ms", "mean"),
    ).reset_index()
    summary[["sd_resets", "sd_resets_per_km"]] = summary[["sd_resets", "sd_resets_per_km"]].fillna(0.0)

    baseline = summary[summary["obstacles"] == 0].set_index(["controller", "pathgen"])["mean_resets"]
    summary["relative_increase_pct"] = [
        100.0 * (row.mean_resets - baseline[(row.controller, row.pathgen)]) / baseline[(row.controller, row.pathgen)]
        if (row.controller, row.pathgen) in baseline.index and baseline[(row.controller, row.pathgen)] > 0
        else np.nan
        for row in summary.itertuples()
    ]

    heuristic = summary[summary["controller"] == HEURISTIC].set_index(["obstacles", "pathgen"])["mean_resets"]
    summary["ratio_to_heuristic"] = [
        row.mean_resets / heuristic[(row.obstacles, row.pathgen)]
        if (row.obstacles, row.pathgen) in heuristic.index and heuristic[(row.obstacles, row.pathgen)] > 0
        else np.nan
        for row in summary.itertuples()
    ]
    return summary[SUMMARY_COLUMNS]


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    """Run every (condition, seed) journey and write results, summary, trajectories and figures."""
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    conditions = build_conditions(spec)
    logger.info(
        f"Experiment {spec.experiment}: {len(conditions)} conditions x {len(spec.seeds)} seeds, "
        f"{spec.journey_steps} ticks per journey"
    )
    paths = ensure_models(spec, conditions)

    scene_cfg: Dict[int, SceneConfig] = {}
    walker_cfg: Dict[str, WalkerConfig] = {}
    policy: PolicyConfig = config.policy
    params_cfg: ControllerConfig = config.controllers
    tasks = []
    for condition in conditions:
        scene = scene_cfg.setdefault(condition.obstacles, _scene(condition.obstacles))
        walker = walker_cfg.setdefault(condition.pathgen, _walker(condition.pathgen))
        path = paths.get(condition.model) if condition.model else None
        for index, seed in enumerate(spec.seeds):
            trajectory_steps = min(spec.trajectory_steps, spec.journey_steps) if index == 0 else 0
            tasks.append(
                (
                    spec.experiment, condition, seed, spec.journey_steps,
                    scene, walker, policy, params_cfg, path, trajectory_steps,
                )
            )

    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(tqdm(pool.map(_run_task, tasks), total=len(tasks), disable=not spec.progress))
    else:
        outcomes = [_run_task(task) for task in tqdm(tasks, disable=not spec.progress, desc=spec.experiment)]

    results = pd.DataFrame([row for row, _ in outcomes], columns=RESULT_COLUMNS)
    order = {condition.name: index for index, condition in enumerate(conditions)}
    if not results.empty:
        results = (
            results.assign(_order=results["condition"].map(order))
            .sort_values(["_order", "seed"], kind="stable")
            .drop(columns="_order")
            .reset_index(drop=True)
        )
    summary = summarize(results)

    files = [out / "results.csv", out / "summary.csv"]
    results.to_csv(files[0], index=False)
    summary.to_csv(files[1], index=False)

    trajectories: Dict[str, pd.DataFrame] = {}
    for (row, frame) in outcomes:
        if frame is not None:
            trajectories[row["condition"]] = frame
            csv_path = out / "gains" / f"{row['condition']}.csv"
            csv_path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(csv_path, index=False)
            files.append(csv_path)

    scene = config.scene
    files += emit_plots(
        out,
        summary=summary,
        trajectories=trajectories,
        group_by="pathgen" if spec.experiment == "exp3" else "obstacles",
        half_width=scene.half_width,
        half_depth=scene.half_depth,
    )
    logger.info(f"Experiment {spec.experiment} finished: {len(results)} journeys, results in {out}")
    return ExperimentReport(results=results, summary=summary, files=files)
