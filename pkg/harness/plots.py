"""Post-hoc SVG figures for journeys, experiments and training runs."""

from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from matplotlib.patches import Rectangle

from utils import PlotHelper, get_logger

logger = get_logger(__name__)


def cumulative_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    steps = np.hypot(np.diff(x), np.diff(y))
    return np.concatenate([[0.0], np.cumsum(steps)])


def plot_paths(
    frame: pd.DataFrame,
    helper: PlotHelper,
    name: str,
    half_width: float = 7.5,
    half_depth: float = 7.5,
) -> Path:
    """Physical path inside the room next to the virtual path."""
    fig, (physical_ax, virtual_ax) = helper.new_figure(ncols=2, width=5.0, height=5.0)

    physical_ax.add_patch(
        Rectangle((-half_width, -half_depth), 2 * half_width, 2 * half_depth, fill=False, color="tan", lw=2)
    )
    physical_ax.plot(frame["physical_x"], frame["physical_y"], color="gray", lw=0.8)
    resets = frame[frame["reset"]]
    physical_ax.scatter(resets["physical_x"], resets["physical_y"], s=10, color="crimson", label="reset")
    physical_ax.set_xlim(-half_width, half_width)
    physical_ax.set_ylim(-half_depth, half_depth)
    physical_ax.set_aspect("equal")
    physical_ax.set_title("Physical space")

    virtual_ax.plot(frame["virtual_x"], frame["virtual_y"], color="gray", lw=0.8)
    virtual_ax.set_aspect("equal")
    virtual_ax.set_title("Virtual space")

    fig.suptitle(name)
    return helper.save_figure(fig, name, subdir="paths")


def plot_gains(frame: pd.DataFrame, helper: PlotHelper, name: str) -> Path:
    """Translation and curvature gains against physical distance walked."""
    walked = cumulative_distance(frame["physical_x"].to_numpy(), frame["physical_y"].to_numpy())
    fig, (translation_ax, curvature_ax) = helper.new_figure(ncols=2, width=6.0, height=3.5)

    translation_ax.plot(walked, frame["g_T"], lw=0.8)
    translation_ax.set_ylim(0.84, 1.28)
    translation_ax.set_xlabel("Physical distance (m)")
    translation_ax.set_ylabel("Translation gain")

    curvature_ax.plot(walked, frame["g_C"], lw=0.8, color="darkorange")
    curvature_ax.set_ylim(-0.14, 0.14)
    curvature_ax.set_xlabel("Physical distance (m)")
    curvature_ax.set_ylabel("Curvature gain (1/m)")

    fig.suptitle(name)
    return helper.save_figure(fig, name, subdir="gains")


def plot_reset_counts(summary: pd.DataFrame, helper: PlotHelper, name: str, group_by: str) -> Path:
    """Grouped bars of mean resets (± SD) per controller within each ``group_by`` value."""
    groups = list(dict.fromkeys(summary[group_by]))
    controllers = list(dict.fromkeys(summary["controller"]))
    width = 0.8 / max(len(controllers), 1)
    fig, (ax,) = helper.new_figure(width=max(6.0, 1.5 * len(groups)), height=4.0)

    for index, controller in enumerate(controllers):
        own = summary[summary["controller"] == controller]
        rows = own.groupby(group_by)[["mean_resets", "sd_resets"]].mean()
        means = [rows["mean_resets"].get(group, np.nan) for group in groups]
        sds = [rows["sd_resets"].get(group, np.nan) for group in groups]
        positions = np.arange(len(groups)) + (index - (len(controllers) - 1) / 2) * width
        ax.bar(positions, means, width, yerr=sds, capsize=3, label=controller)

    ax.set_xticks(np.arange(len(groups)))
    ax.set_xticklabels([str(group) for group in groups])
    ax.set_xlabel(group_by)
    ax.set_ylabel("Resets")
    ax.legend(fontsize="small")
    return helper.save_figure(fig, name)


def plot_reset_angles(summary: pd.DataFrame, helper: PlotHelper, name: str) -> Path:
    """Mean reset turn with SD error bars per condition."""
    fig, (ax,) = helper.new_figure(width=max(6.0, 0.8 * len(summary)), height=4.0)
    positions = np.arange(len(summary))
    ax.errorbar(positions, summary["mean_reset_angle"], yerr=summary["sd_reset_angle"], fmt="o", capsize=4)
    ax.axhline(180.0, color="gray", ls="--", lw=0.8)
    ax.set_xticks(positions)
    ax.set_xticklabels(summary["condition"], rotation=45, ha="right", fontsize="small")
    ax.set_ylim(0.0, 360.0)
    ax.set_ylabel("Reset angle (deg)")
    return helper.save_figure(fig, name)


def plot_training_curve(frame: pd.DataFrame, helper: PlotHelper, name: str) -> Path:
    fig, (reward_ax, reset_ax) = helper.new_figure(ncols=2, width=5.0, height=3.5)
    reward_ax.plot(frame["env_steps"], frame["mean_reward"], marker=".")
    reward_ax.set_xlabel("Environment steps")
    reward_ax.set_ylabel("Mean reward per decision")
    reset_ax.plot(frame["env_steps"], frame["reset_rate"], marker=".", color="crimson")
    reset_ax.set_xlabel("Environment steps")
    reset_ax.set_ylabel("Resets per km")
    fig.suptitle(name)
    return helper.save_figure(fig, name, subdir="training")


def emit_plots(
    out_dir: str | Path,
    summary: Optional[pd.DataFrame] = None,
    trajectories: Optional[Dict[str, pd.DataFrame]] = None,
    group_by: str = "obstacles",
    half_width: float = 7.5,
    half_depth: float = 7.5,
) -> List[Path]:
    """Path and gain plots per trajectory log, plus reset-count and reset-angle charts."""
    helper = PlotHelper(out_dir)
    written: List[Path] = []
    for name, frame in (trajectories or {}).items():
        if frame.empty:
            logger.warning(f"Trajectory {name} is empty; skipping its plots")
            continue
        written.append(plot_paths(frame, helper, name, half_width, half_depth))
        written.append(plot_gains(frame, helper, name))

    if summary is not None and not summary.empty:
        written.append(plot_reset_counts(summary, helper, "resets", group_by))
        angles = summary.dropna(subset=["mean_reset_angle"])
        if not angles.empty:
            written.append(plot_reset_angles(angles, helper, "reset_angles"))
    logger.info(f"{len(written)} figures written to {helper.plot_dir}")
    return written
