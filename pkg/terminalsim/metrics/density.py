"""Local crowd density from grid occupancy."""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..domain import Cell
from ..environment import CELL_SIDE

WINDOW_CELLS = 5
"""Side of the square probe window in cells (2 m x 2 m)."""


def density_map(occupancy: np.ndarray, window: int = WINDOW_CELLS) -> np.ndarray:
    """Persons per square metre in the ``window`` x ``window`` square centred on each cell.

    Cells outside the grid count as empty, so the map has the grid's shape.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be a positive odd number of cells")
    pad = window // 2
    padded = np.pad(np.asarray(occupancy, dtype=float), pad)
    counts = sliding_window_view(padded, (window, window)).sum(axis=(-1, -2))
    return np.asarray(counts / (window * CELL_SIDE) ** 2)


@dataclass
class DensityProbe:
    """Per-step observer keeping the peak local density of a run."""

    window: int = WINDOW_CELLS
    peak: float = 0.0
    peak_time: float | None = None
    peak_cell: Cell | None = None
    samples: list[tuple[float, float]] = field(default_factory=list)

    def observe(self, t: float, occupancy: np.ndarray) -> float:
        densities = density_map(occupancy, self.window)
        index = np.unravel_index(int(np.argmax(densities)), densities.shape)
        value = float(densities[index])
        self.samples.append((t, value))
        if value > self.peak:
            self.peak = value
            self.peak_time = t
            self.peak_cell = (int(index[0]), int(index[1]))
        return value
