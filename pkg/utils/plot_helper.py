"""Figure utility for saving SVG plots into a report directory."""

from pathlib import Path
from typing import Any, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from utils.logger import get_logger  # noqa: E402

logger = get_logger(__name__)


class PlotHelper:
    """Helper class for creating and saving figures."""

    def __init__(self, plot_dir: str | Path = "reports/plots"):
        self.plot_dir = Path(plot_dir)
        self._ensure_plot_dir()

    def _ensure_plot_dir(self) -> None:
        """Ensure plot directory exists."""
        self.plot_dir.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Plot directory ready: {self.plot_dir}")

    def new_figure(self, ncols: int = 1, width: float = 6.0, height: float = 4.0) -> tuple:
        fig, axes = plt.subplots(1, ncols, figsize=(width * ncols, height), squeeze=False)
        return fig, axes[0]

    def save_figure(self, fig: Any, filename: str, subdir: Optional[str] = None) -> Path:
        # Ensure .svg extension
        if not filename.endswith(".svg"):
            filename = f"{filename}.svg"

        directory = self.plot_dir / subdir if subdir else self.plot_dir
        directory.mkdir(parents=True, exist_ok=True)
        filepath = directory / filename

        try:
            fig.savefig(filepath, format="svg", bbox_inches="tight")
            logger.info(f"Figure saved: {filepath}")
        finally:
            plt.close(fig)

        return filepath
