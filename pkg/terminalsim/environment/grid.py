"""Discrete grid environments: cells, targets and border bindings."""

import math
import string
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import ndimage

from ..domain import Cell
from ..domain.exceptions import EnvironmentDocumentError, UnknownTargetError
from .delays import DelayDistribution

CELL_SIDE = 0.4
"""Edge length of one grid cell in metres."""

MAX_DENSITY = 6.25
"""Persons per square metre when every cell is occupied (1 / 0.4²)."""

DEFAULT_FREE_SPEED = 1.34
"""Average free walking speed in m/s."""

WALKABLE = "."
OBSTACLE = "#"
TARGET_LABELS = frozenset(string.ascii_uppercase + string.digits)

# 4-connectivity structure for target cell sets
_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


class CellKind(str, Enum):
    WALKABLE = "walkable"
    OBSTACLE = "obstacle"
    TARGET = "target"


class TargetKind(str, Enum):
    """How a target behaves when an agent reaches it."""

    INTERMEDIATE = "intermediate"
    FINAL = "final"
    DELAYING = "delaying"
    SCHEDULED = "scheduled"


def geometric_median_cell(cells: frozenset[Cell]) -> Cell:
    """Member cell minimising the summed Euclidean distance to all members.

    Ties are broken by lowest row, then lowest column.
    """
    ordered = sorted(cells)
    points = np.array(ordered, dtype=float)
    diffs = points[:, None, :] - points[None, :, :]
    totals = np.sqrt((diffs**2).sum(axis=2)).sum(axis=1)
    best = totals.min()
    return next(cell for cell, total in zip(ordered, totals) if total <= best + 1e-9)


@dataclass(frozen=True)
class Target:
    """A labelled set of cells acting as a node of the routing graph.

    Attributes:
        id: Single-character label used in the grid.
        kind: Behaviour on arrival.
        cells: The 4-connected cells carrying the label.
        delay: Delay distribution, for delaying targets only.
        schedule_id: Gate schedule, for scheduled targets only.
        node: Global node id, for final targets bound to the outer graph.
    """

    id: str
    kind: TargetKind
    cells: frozenset[Cell]
    delay: DelayDistribution | None = None
    schedule_id: str | None = None
    node: str | None = None

    @cached_property
    def center(self) -> Cell:
        return geometric_median_cell(self.cells)

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)


@dataclass(frozen=True)
class GridEnvironment:
    """Immutable grid of walkable, obstacle and target cells.

    The grid is stored as one string per row using the document alphabet
    (``.`` walkable, ``#`` obstacle, ``A``-``Z``/``0``-``9`` target labels);
    numpy views are derived on demand.

    Raises:
        EnvironmentDocumentError: If targets and grid labels disagree, a
            target is not 4-connected or a final target is not on the border.
    """

    id: str
    rows: tuple[str, ...]
    targets: tuple[Target, ...]
    free_speed: float = DEFAULT_FREE_SPEED
    cell_side: float = field(default=CELL_SIDE)

    def __post_init__(self) -> None:
        if not math.isclose(self.cell_side, CELL_SIDE):
            raise EnvironmentDocumentError(f"cell_side must be {CELL_SIDE} m, got {self.cell_side}")
        if self.free_speed <= 0:
            raise EnvironmentDocumentError("speed must be positive")
        if not self.rows or any(len(row) != len(self.rows[0]) for row in self.rows):
            raise EnvironmentDocumentError("grid rows must be non-empty and of equal width")
        seen: set[str] = set()
        for target in self.targets:
            if target.id in seen:
                raise EnvironmentDocumentError(f"duplicate target id {target.id!r}")
            seen.add(target.id)
            self._check_target(target)
        labels = {ch for row in self.rows for ch in row} & TARGET_LABELS
        missing = sorted(labels - seen)
        if missing:
            raise EnvironmentDocumentError(f"target {missing[0]!r} has no attribute line")

    def _check_target(self, target: Target) -> None:
        if not target.cells:
            raise EnvironmentDocumentError(f"target {target.id!r} has no cells")
        for row, col in target.cells:
            if not self.in_bounds((row, col)):
                raise EnvironmentDocumentError(
                    f"cell ({row}, {col}) of target {target.id!r} is outside the grid"
                )
            if self.rows[row][col] != target.id:
                raise EnvironmentDocumentError(
                    f"cell ({row}, {col}) of target {target.id!r} is not labelled with it"
                )
        if sum(row.count(target.id) for row in self.rows) != len(target.cells):
            raise EnvironmentDocumentError(f"grid cells labelled {target.id!r} are not all listed")
        mask = np.zeros(self.shape, dtype=bool)
        mask[tuple(np.array(sorted(target.cells)).T)] = True
        _, components = ndimage.label(mask, structure=_FOUR_CONNECTED)
        if components != 1:
            raise EnvironmentDocumentError(f"cells of target {target.id!r} are not 4-connected")
        if target.kind is TargetKind.FINAL and not any(
            self.on_border(cell) for cell in target.cells
        ):
            raise EnvironmentDocumentError(f"final target {target.id!r} is not on the border")
        if target.node is not None and target.kind is not TargetKind.FINAL:
            raise EnvironmentDocumentError(
                f"only final targets bind global nodes, {target.id!r} is {target.kind.value}"
            )

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @cached_property
    def labels(self) -> np.ndarray:
        """Grid as a 2-D array of single-character labels."""
        return np.array([list(row) for row in self.rows])

    @cached_property
    def traversable(self) -> np.ndarray:
        """Boolean mask of cells an agent may stand on."""
        return np.asarray(self.labels != OBSTACLE)

    @cached_property
    def targets_by_id(self) -> dict[str, Target]:
        return {target.id: target for target in self.targets}

    @cached_property
    def border_nodes(self) -> list[tuple[str, str]]:
        """``(target_id, global_node_id)`` for every bound final target."""
        return [(t.id, t.node) for t in self.targets if t.node is not None]

    def target(self, target_id: str) -> Target:
        try:
            return self.targets_by_id[target_id]
        except KeyError:
            raise UnknownTargetError(target_id, self.id) from None

    def node_of(self, target_id: str) -> str:
        """Global node id of a target; unbound targets get ``<env>.<label>``."""
        node = self.target(target_id).node
        return node if node is not None else f"{self.id}.{target_id}"

    def kind_at(self, cell: Cell) -> CellKind:
        label = self.rows[cell[0]][cell[1]]
        if label == OBSTACLE:
            return CellKind.OBSTACLE
        if label == WALKABLE:
            return CellKind.WALKABLE
        return CellKind.TARGET

    def target_at(self, cell: Cell) -> str | None:
        label = self.rows[cell[0]][cell[1]]
        return label if label in TARGET_LABELS else None

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    def on_border(self, cell: Cell) -> bool:
        row, col = cell
        return row in (0, self.height - 1) or col in (0, self.width - 1)
