"""Per-step trajectory recording for path and gain plots."""

from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from locomotion.user_state import GainSet, UserState
from utils import get_logger

logger = get_logger(__name__)

TRAJECTORY_COLUMNS = [
    "step",
    "physical_x",
    "physical_y",
    "physical_heading",
    "virtual_x",
    "virtual_y",
    "virtual_heading",
    "g_T",
    "g_C",
    "reset",
]


class TrajectoryLogger:
    """Collects one row per simulation step, up to ``max_steps`` rows (None = unlimited)."""

    def __init__(self, max_steps: Optional[int] = None):
        self.max_steps = max_steps
        self._rows: List[Dict[str, Any]] = []

    @property
    def full(self) -> bool:
        return self.max_steps is not None and len(self._rows) >= self.max_steps

    def __len__(self) -> int:
        return len(self._rows)

    def record(self, step: int, state: UserState, gains: GainSet, reset: bool) -> None:
        if self.full:
            return
        self._rows.append(
            {
                "step": step,
                "physical_x": state.physical.x,
                "physical_y": state.physical.y,
                "physical_heading": state.physical.heading,
                "virtual_x": state.virtual.x,
                "virtual_y": state.virtual.y,
                "virtual_heading": state.virtual.heading,
                "g_T": gains.translation,
                "g_C": gains.curvature,
                "reset": bool(reset),
            }
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self._rows, columns=TRAJECTORY_COLUMNS)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        logger.info(f"Trajectory log written: {path} ({len(self._rows)} steps)")
        return path
