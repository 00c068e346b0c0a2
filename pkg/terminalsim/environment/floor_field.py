"""Per-target floor fields: walking distance from every cell to a target.

Fields are shortest-path distance transforms over the 8-neighbourhood of the
grid (0.4 m orthogonal steps, 0.4·√2 m diagonal steps). A diagonal step is
only allowed when both orthogonal cells it passes are free of obstacles.

With ``isolate_targets=True`` (the routing variant) the cells of other
targets absorb the diffusion: a distance can enter another target and
spread within it but never leaves it. The values at other targets'
centres are kept in :attr:`FloorField.reach` for network extraction and
masked to :data:`UNREACHABLE` in :attr:`FloorField.values`. The navigation
variant used by the CA is blocked by obstacles only.
"""

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..domain import Cell
from .grid import CELL_SIDE, WALKABLE, GridEnvironment

UNREACHABLE = math.inf
"""Sentinel distance for cells the diffusion never reaches."""

DIAGONAL_STEP = CELL_SIDE * math.sqrt(2.0)

NEIGHBOURHOOD: tuple[tuple[int, int, float], ...] = (
    (-1, 0, CELL_SIDE),
    (1, 0, CELL_SIDE),
    (0, -1, CELL_SIDE),
    (0, 1, CELL_SIDE),
    (-1, -1, DIAGONAL_STEP),
    (-1, 1, DIAGONAL_STEP),
    (1, -1, DIAGONAL_STEP),
    (1, 1, DIAGONAL_STEP),
)


@dataclass(frozen=True, eq=False)
class FloorField:
    """Distance field of one target.

    Attributes:
        target_id: The target the field descends towards.
        values: ``(height, width)`` array of metres; ``UNREACHABLE`` where
            the diffusion does not arrive.
        reach: Raw distance at the centre of every other target the
            diffusion entered (routing variant only).
    """

    target_id: str
    values: np.ndarray
    reach: Mapping[str, float] = field(default_factory=dict)

    @cached_property
    def table(self) -> list[list[float]]:
        """Values as nested lists, for fast scalar lookups in the CA loop."""
        return list(self.values.tolist())

    def at(self, cell: Cell) -> float:
        return float(self.values[cell])

    def reaches(self, cell: Cell) -> bool:
        return math.isfinite(self.values[cell])


def step_allowed(env: GridEnvironment, cell: Cell, dr: int, dc: int) -> bool:
    """Whether an agent or the diffusion may step from ``cell`` by (dr, dc)."""
    row, col = cell[0] + dr, cell[1] + dc
    if not env.in_bounds((row, col)) or not env.traversable[row, col]:
        return False
    if dr and dc:
        free = env.traversable
        return bool(free[cell[0] + dr, cell[1]] and free[cell[0], cell[1] + dc])
    return True


def _step_graph(env: GridEnvironment, target_id: str, isolate_targets: bool) -> csr_matrix:
    height, width = env.shape
    labels = env.labels
    free = env.traversable
    index = np.arange(height * width).reshape(height, width)
    sources: list[np.ndarray] = [np.empty(0, dtype=int)]
    sinks: list[np.ndarray] = [np.empty(0, dtype=int)]
    costs: list[np.ndarray] = [np.empty(0, dtype=float)]

    for dr, dc, cost in NEIGHBOURHOOD:
        # slices of origin cells whose (dr, dc) neighbour lies inside the grid
        r0, r1 = max(0, -dr), height - max(0, dr)
        c0, c1 = max(0, -dc), width - max(0, dc)
        if r0 >= r1 or c0 >= c1:
            continue
        src = (slice(r0, r1), slice(c0, c1))
        dst = (slice(r0 + dr, r1 + dr), slice(c0 + dc, c1 + dc))
        allowed = free[src] & free[dst]
        if dr and dc:
            allowed &= free[r0 + dr : r1 + dr, c0:c1] & free[r0:r1, c0 + dc : c1 + dc]
        if isolate_targets:
            origin = labels[src]
            allowed &= (origin == WALKABLE) | (origin == target_id) | (origin == labels[dst])
        sources.append(index[src][allowed])
        sinks.append(index[dst][allowed])
        costs.append(np.full(int(allowed.sum()), cost))

    size = height * width
    return csr_matrix(
        (np.concatenate(costs), (np.concatenate(sources), np.concatenate(sinks))),
        shape=(size, size),
    )


def compute_floor_field(
    env: GridEnvironment, target_id: str, *, isolate_targets: bool = True
) -> FloorField:
    """Compute the floor field of one target.

    Raises:
        UnknownTargetError: If the target is not defined in ``env``.
    """
    target = env.target(target_id)
    height, width = env.shape
    graph = _step_graph(env, target_id, isolate_targets)
    origins = [row * width + col for row, col in target.sorted_cells()]
    distances = dijkstra(graph, directed=True, indices=origins, min_only=True)
    values = np.asarray(distances, dtype=float).reshape(height, width)

    reach: dict[str, float] = {}
    if isolate_targets:
        for other in env.targets:
            if other.id == target_id:
                continue
            value = float(values[other.center])
            if math.isfinite(value):
                reach[other.id] = value
            for cell in other.cells:
                values[cell] = UNREACHABLE
    values[~env.traversable] = UNREACHABLE
    values.setflags(write=False)
    return FloorField(target_id=target_id, values=values, reach=reach)


def compute_floor_fields(
    env: GridEnvironment, *, isolate_targets: bool = True
) -> dict[str, FloorField]:
    """Fields for every target of ``env``, keyed by target id."""
    return {
        target.id: compute_floor_field(env, target.id, isolate_targets=isolate_targets)
        for target in env.targets
    }
