"""The bundled synthetic-terminal scenario.

Two mirrored terminal environments (``WH`` and ``SG``) joined by two ferry
links of 8 km crossed in 25 minutes. The terminal layout is an abstraction
of a ferry terminal, not a survey of a real building:

- a street entrance ``E`` on the top border leads into the waiting room;
- two scheduled gates ``G`` and ``H`` separate the waiting room from the
  boarding hall, which ends at the boarding slip ``F`` (node ``<T>_DOCK``);
- arriving ferries unload onto the landing slip ``P`` (node ``<T>_PIER``)
  of a separate disembarking hall, left through the doors ``D``
  (exponential 3 s delay) to the exit ``X`` on the left border.

The two halls share no cells, so disembarking and boarding passengers
never cross. A ferry leaves every 15 minutes from ``<T>_DOCK`` for the
other terminal's ``<T>_PIER``; both gates open together for the ten minutes
before each departure.
"""

import logging
from pathlib import Path

from ..environment import (
    ExponentialDelay,
    GridEnvironment,
    Target,
    TargetKind,
)
from ..meso import LinkSpec
from ..micro import GateSchedule
from .demand import DemandSpec, generate_demand, preset_demand
from .model import Scenario, assemble, write_scenario

LOGGER = logging.getLogger(__name__)

WIDTH = 40
HEIGHT = 32
FERRY_LENGTH_M = 8000.0
FERRY_CROSSING_S = 1500.0
FERRY_CAPACITY = 6000
FERRY_UNLOADING_RATE = 20.0
DEPARTURE_HEADWAY_S = 900.0
GATE_OPEN_S = 600.0
FIRST_OPENING_S = 240.0
DOOR_DELAY_MEAN_S = 3.0
SIM_END_S = 3600.0

_STREET = (0, range(15, 25))
_GATES = {"G": (15, range(22, 26)), "H": (15, range(32, 36))}
_BOARDING_SLIP = (HEIGHT - 1, range(21, 38))
_LANDING_SLIP = (HEIGHT - 1, range(5, 18))
_HALL_WALL_COL = 19
_DOOR_COL = 3
_HALL_ROWS = range(16, HEIGHT - 1)


def terminal_rows() -> tuple[str, ...]:
    """Grid rows of one terminal environment."""
    grid = [["#"] * WIDTH for _ in range(HEIGHT)]
    for row in range(1, HEIGHT - 1):
        for col in range(1, WIDTH - 1):
            grid[row][col] = "."
    row, cols = _STREET
    for col in cols:
        grid[row][col] = "E"
    for col in range(WIDTH):
        grid[15][col] = "#"
    for label, (row, cols) in _GATES.items():
        for col in cols:
            grid[row][col] = label
    for row in _HALL_ROWS:
        grid[row][_HALL_WALL_COL] = "#"
        grid[row][_DOOR_COL] = "D"
        grid[row][0] = "X"
    for label, (row, cols) in (("F", _BOARDING_SLIP), ("P", _LANDING_SLIP)):
        for col in cols:
            grid[row][col] = label
    return tuple("".join(cells) for cells in grid)


def terminal_environment(terminal: str) -> GridEnvironment:
    """One terminal environment; node ids are prefixed with ``terminal``."""
    rows = terminal_rows()

    def cells(label: str) -> frozenset[tuple[int, int]]:
        return frozenset(
            (r, c) for r, line in enumerate(rows) for c, ch in enumerate(line) if ch == label
        )

    prefix = terminal.lower()
    targets = (
        Target("E", TargetKind.FINAL, cells("E"), node=f"{terminal}_STREET"),
        Target("G", TargetKind.SCHEDULED, cells("G"), schedule_id=f"{prefix}_gate_1"),
        Target("H", TargetKind.SCHEDULED, cells("H"), schedule_id=f"{prefix}_gate_2"),
        Target("F", TargetKind.FINAL, cells("F"), node=f"{terminal}_DOCK"),
        Target("P", TargetKind.FINAL, cells("P"), node=f"{terminal}_PIER"),
        Target("D", TargetKind.DELAYING, cells("D"), delay=ExponentialDelay(DOOR_DELAY_MEAN_S)),
        Target("X", TargetKind.FINAL, cells("X"), node=f"{terminal}_EXIT"),
    )
    return GridEnvironment(id=terminal, rows=rows, targets=targets)


def gate_schedules(terminal: str, sim_end: float = SIM_END_S) -> list[GateSchedule]:
    """Schedules of both gates of ``terminal``; they share every window."""
    windows = []
    opening = FIRST_OPENING_S
    while opening < sim_end:
        windows.append((opening, opening + GATE_OPEN_S))
        opening += DEPARTURE_HEADWAY_S
    prefix = terminal.lower()
    return [
        GateSchedule(id=f"{prefix}_gate_{index}", windows=tuple(windows)) for index in (1, 2)
    ]


def ferry_links(first: str = "WH", second: str = "SG") -> list[LinkSpec]:
    speed = FERRY_LENGTH_M / FERRY_CROSSING_S
    return [
        LinkSpec(
            id=f"{origin}_{destination}_FERRY",
            from_node=f"{origin}_DOCK",
            to_node=f"{destination}_PIER",
            length_m=FERRY_LENGTH_M,
            area_m2=FERRY_CAPACITY / 6.25,
            free_speed=speed,
            flow_capacity=FERRY_UNLOADING_RATE,
            storage_capacity=FERRY_CAPACITY,
        )
        for origin, destination in ((first, second), (second, first))
    ]


def synthetic_scenario(
    demand: DemandSpec | None = None,
    *,
    preset: str = "observed_peak",
    sim_end: float = SIM_END_S,
    seed: int = 0,
    iterations: int = 1,
) -> Scenario:
    """Assemble the synthetic two-terminal scenario.

    ``demand`` overrides the named ``preset`` (boarding at WH towards SG).
    """
    spec = demand if demand is not None else preset_demand(preset, seed=seed)
    environments = [terminal_environment("WH"), terminal_environment("SG")]
    schedules = gate_schedules("WH", sim_end) + gate_schedules("SG", sim_end)
    return assemble(
        environments,
        ferry_links(),
        schedules,
        generate_demand(spec),
        sim_end,
        seed=seed,
        iterations=iterations,
    )


def write_synthetic_scenario(directory: Path | str, *, preset: str = "observed_peak") -> Path:
    """Write the synthetic scenario documents; returns the manifest path."""
    path = write_scenario(synthetic_scenario(preset=preset), directory)
    LOGGER.info("Synthetic scenario written", extra={"preset": preset, "path": str(path)})
    return path
