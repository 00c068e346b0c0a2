"""Bottleneck benchmark: flow through an opening of varying width.

The benchmark room is a crowd block above a dividing wall with a centred
opening of ``omega`` metres. All agents are generated at once, walk through
the opening (an intermediate target) and leave at the bottom of the room.
Crossings are binned per second and averaged over a steady-state window.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from scipy.optimize import isotonic_regression

from ..domain import TargetReached
from ..environment import CELL_SIDE, GridEnvironment, Target, TargetKind
from ..micro import CaConfig, MicroSimulation
from .density import DensityProbe

LOGGER = logging.getLogger(__name__)

ROOM_WIDTH = 33
CROWD_ROWS = 13
GAP_ROWS = 5
EXIT_ROWS = 8
OPENING = "O"
EXIT = "X"


class BottleneckConfig(BaseSettings):
    """Sweep parameters (prefix ``TERMINALSIM_BOTTLENECK_``)."""

    omega_min: float = Field(default=0.4, gt=0)
    omega_max: float = Field(default=5.2, gt=0)
    omega_step: float = Field(default=0.4, gt=0)
    agents: int = Field(default=350, ge=1)
    window_start: float = Field(default=5.0, ge=0)
    window_end: float = Field(default=35.0, gt=0)
    repetitions: int = Field(default=5, ge=1)
    max_time: float = Field(default=600.0, gt=0)
    rng_seed: int = 0

    model_config = SettingsConfigDict(env_prefix="TERMINALSIM_BOTTLENECK_", frozen=True)

    @model_validator(mode="after")
    def _check_ranges(self) -> "BottleneckConfig":
        if self.omega_max < self.omega_min:
            raise ValueError("omega_max must not be below omega_min")
        if self.window_end <= self.window_start:
            raise ValueError("measurement window must not be empty")
        if opening_cells(self.omega_max) > ROOM_WIDTH - 2:
            limit = (ROOM_WIDTH - 2) * CELL_SIDE
            raise ValueError(f"omega_max exceeds the room width of {limit} m")
        return self

    def omegas(self) -> list[float]:
        count = int(math.floor((self.omega_max - self.omega_min) / self.omega_step + 1e-9)) + 1
        return [round(self.omega_min + i * self.omega_step, 6) for i in range(count)]


@dataclass(frozen=True, slots=True)
class BottleneckResult:
    omega: float
    flow: float
    raw_flow: float
    window: tuple[float, float]
    crossings: int
    first_crossing: float | None
    last_crossing: float | None
    peak_density: float


def opening_cells(omega: float) -> int:
    return max(1, int(round(omega / CELL_SIDE)))


def bottleneck_room(omega: float) -> GridEnvironment:
    """The benchmark room with an opening of ``omega`` metres."""
    width = opening_cells(omega)
    start = (ROOM_WIDTH - width) // 2
    inner = "#" + "." * (ROOM_WIDTH - 2) + "#"
    wall = "".join(OPENING if start <= c < start + width else "#" for c in range(ROOM_WIDTH))
    rows = (
        ["#" * ROOM_WIDTH]
        + [inner] * (CROWD_ROWS + GAP_ROWS)
        + [wall]
        + [inner] * EXIT_ROWS
        + ["#" + EXIT * (ROOM_WIDTH - 2) + "#"]
    )

    def cells(label: str) -> frozenset[tuple[int, int]]:
        return frozenset(
            (r, c) for r, line in enumerate(rows) for c, ch in enumerate(line) if ch == label
        )

    return GridEnvironment(
        id="bottleneck",
        rows=tuple(rows),
        targets=(
            Target(OPENING, TargetKind.INTERMEDIATE, cells(OPENING)),
            Target(EXIT, TargetKind.FINAL, cells(EXIT)),
        ),
    )


def crowd_cells() -> list[tuple[int, int]]:
    return [(r, c) for r in range(1, CROWD_ROWS + 1) for c in range(1, ROOM_WIDTH - 1)]


def steady_flow(
    crossings: list[float], window: tuple[float, float], bin_width: float = 1.0
) -> float:
    """Mean crossings per second over the bins inside ``window`` and the crossing span.

    When no full bin qualifies the plain rate over the crossing span is used.
    """
    if not crossings:
        return 0.0
    first, last = min(crossings), max(crossings)
    low = math.ceil(max(window[0], first) / bin_width)
    high = math.floor(min(window[1], last) / bin_width)
    if high > low:
        counts = np.bincount(
            np.floor(np.asarray(crossings) / bin_width).astype(int), minlength=high + 1
        )
        return float(counts[low:high].mean() / bin_width)
    if last > first:
        return (len(crossings) - 1) / (last - first)
    return 0.0


def measure_bottleneck(
    omega: float,
    config: BottleneckConfig | None = None,
    ca_config: CaConfig | None = None,
    repetition: int = 0,
) -> BottleneckResult:
    """Run the benchmark once for one opening width."""
    config = config if config is not None else BottleneckConfig()
    ca_config = ca_config if ca_config is not None else CaConfig()
    env = bottleneck_room(omega)
    slots = crowd_cells()
    if config.agents > len(slots):
        raise ValueError(f"the crowd block holds at most {len(slots)} agents")
    seed = [config.rng_seed, opening_cells(omega), repetition]
    rng = np.random.default_rng(seed)
    sim = MicroSimulation(env, ca_config, rng=rng)
    for index in sorted(rng.choice(len(slots), config.agents, replace=False)):
        sim.add_agent(f"a{index}", slots[int(index)], [OPENING, EXIT], previous_target="start")

    probe = DensityProbe()
    probe.observe(0.0, sim.occupancy_grid())
    crossings: list[float] = []
    dt = ca_config.timestep
    step = 0
    while len(crossings) < config.agents:
        step += 1
        t = round(step * dt, 6)
        if t > config.max_time:
            LOGGER.warning(
                "Bottleneck run hit the time cap",
                extra={"omega": omega, "crossed": len(crossings), "max_time": config.max_time},
            )
            break
        for event in sim.step(t):
            if isinstance(event.data, TargetReached) and event.data.target_id == OPENING:
                crossings.append(event.time)
        for state in sim.holding():
            sim.release(state.agent_id)
        probe.observe(t, sim.occupancy_grid())

    window = (config.window_start, config.window_end)
    flow = steady_flow(crossings, window)
    return BottleneckResult(
        omega=omega,
        flow=flow,
        raw_flow=flow,
        window=window,
        crossings=len(crossings),
        first_crossing=min(crossings) if crossings else None,
        last_crossing=max(crossings) if crossings else None,
        peak_density=probe.peak,
    )


def bottleneck_sweep(
    config: BottleneckConfig | None = None, ca_config: CaConfig | None = None
) -> list[BottleneckResult]:
    """Flow for every opening width of the configured range.

    Each width is run ``repetitions`` times; ``raw_flow`` is the mean of
    their steady flows. Flow cannot drop when the opening widens, so
    ``flow`` is the least-squares non-decreasing fit of the raw means over
    the sweep. ``crossings`` is the fewest of any repetition and
    ``peak_density`` the highest; the crossing times come from the first
    repetition.
    """
    config = config if config is not None else BottleneckConfig()
    points: list[tuple[float, list[BottleneckResult]]] = []
    for omega in config.omegas():
        runs = [
            measure_bottleneck(omega, config, ca_config, repetition)
            for repetition in range(config.repetitions)
        ]
        points.append((omega, runs))

    raw = np.array([np.mean([run.flow for run in runs]) for _, runs in points])
    fitted = isotonic_regression(raw, increasing=True).x
    results: list[BottleneckResult] = []
    for (omega, runs), raw_flow, flow in zip(points, raw, fitted):
        first = runs[0]
        result = BottleneckResult(
            omega=omega,
            flow=float(flow),
            raw_flow=float(raw_flow),
            window=first.window,
            crossings=min(run.crossings for run in runs),
            first_crossing=first.first_crossing,
            last_crossing=first.last_crossing,
            peak_density=max(run.peak_density for run in runs),
        )
        LOGGER.info(
            "Bottleneck point measured",
            extra={
                "omega": omega,
                "flow": result.flow,
                "raw_flow": result.raw_flow,
                "crossings": result.crossings,
            },
        )
        results.append(result)
    return results


BOTTLENECK_COLUMNS = (
    "omega_m",
    "flow_per_s",
    "raw_flow_per_s",
    "window_start_s",
    "window_end_s",
    "crossings",
    "first_crossing_s",
    "last_crossing_s",
    "peak_density",
)


def write_bottleneck(results: list[BottleneckResult], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(BOTTLENECK_COLUMNS)
        for result in results:
            writer.writerow(
                [
                    f"{result.omega:.2f}",
                    f"{result.flow:.6f}",
                    f"{result.raw_flow:.6f}",
                    f"{result.window[0]:.6f}",
                    f"{result.window[1]:.6f}",
                    result.crossings,
                    "" if result.first_crossing is None else f"{result.first_crossing:.6f}",
                    "" if result.last_crossing is None else f"{result.last_crossing:.6f}",
                    f"{result.peak_density:.6f}",
                ]
            )
    return path
