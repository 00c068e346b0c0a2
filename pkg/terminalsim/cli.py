"""Command line entry point.

Each subcommand reads scenario documents or an event log, runs one experiment
and writes CSV tables (plus the NDJSON event log for runs)::

    terminalsim simulate scenario.manifest --out out/
    terminalsim relax scenario.manifest --iterations 30 --mode so
    terminalsim stats out/events.ndjson --segments segments.csv
    terminalsim bottleneck --omega-min 0.4 --omega-max 5.2 --agents 350 --window 5:35
    terminalsim cycle-report out/events.ndjson
    terminalsim synthetic scenario/ --preset projection_2017

Invalid documents or parameters exit with status 2.
"""

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator
from pydantic_settings import (
    BaseSettings,
    CliApp,
    CliPositionalArg,
    CliSubCommand,
    SettingsConfigDict,
    SettingsError,
)

from .domain.exceptions import TerminalSimError
from .metrics import (
    DEFAULT_SEGMENT,
    BottleneckConfig,
    bottleneck_sweep,
    landing_cycle_report,
    load_segments,
    travel_time_stats,
    write_bottleneck,
    write_cycle_report,
    write_stats,
)
from .micro import CaConfig
from .multiscale import MultiscaleSimulation
from .multiscale.log import read_ndjson, write_ndjson
from .planning import RelaxationConfig, initial_plans, relax, write_history
from .scenario import DEMAND_PRESETS, load_scenario, write_synthetic_scenario

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2


class LoggingSettings(BaseSettings):
    """Log output of the command line (``TERMINALSIM_LOG_LEVEL``)."""

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    model_config = SettingsConfigDict(env_prefix="TERMINALSIM_LOG_", case_sensitive=False)

    @field_validator("level", mode="before")
    @classmethod
    def _upper(cls, value: object) -> object:
        return value.upper() if isinstance(value, str) else value


class _ExtraFormatter(logging.Formatter):
    """Appends the ``extra`` context of a record as ``key=value`` pairs."""

    _reserved = frozenset(vars(logging.makeLogRecord({})))

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        context = {k: v for k, v in vars(record).items() if k not in self._reserved}
        context.pop("message", None)
        context.pop("asctime", None)
        if not context:
            return message
        return message + " " + " ".join(f"{k}={v}" for k, v in sorted(context.items()))


def configure_logging(settings: LoggingSettings | None = None) -> None:
    settings = settings if settings is not None else LoggingSettings()
    handler = logging.StreamHandler()
    handler.setFormatter(_ExtraFormatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("terminalsim")
    root.handlers[:] = [handler]
    root.setLevel(settings.level)
    root.propagate = False


# Subcommands


def _parse_window(value: str) -> tuple[float, float]:
    start, sep, end = value.partition(":")
    if not sep:
        raise ValueError("window must be given as start:end")
    return float(start), float(end)


class SimulateCommand(BaseModel):
    """Simulate a scenario once with every agent on its free-flow shortest path."""

    manifest: CliPositionalArg[Path]
    out: Path = Field(default=Path("out"), description="Output directory.")
    segments: Path | None = Field(default=None, description="Segments CSV for the stats table.")

    def cli_cmd(self) -> None:
        scenario = load_scenario(self.manifest)
        simulation = MultiscaleSimulation(
            scenario.graph,
            scenario.environments,
            scenario.links,
            scenario.schedules_by_id,
            scenario.sim_end,
            config=CaConfig(rng_seed=scenario.seed),
        )
        result = simulation.run(initial_plans(scenario))
        segments = load_segments(self.segments) if self.segments else [DEFAULT_SEGMENT]
        self.out.mkdir(parents=True, exist_ok=True)
        write_ndjson(result.events, self.out / "events.ndjson")
        write_stats(travel_time_stats(result.events, segments), self.out / "stats.csv")
        LOGGER.info(
            "Simulation written",
            extra={"out": str(self.out), "incomplete": len(result.incomplete)},
        )


class RelaxCommand(BaseModel):
    """Relax plans towards Nash equilibrium or system optimum."""

    manifest: CliPositionalArg[Path]
    iterations: int | None = Field(default=None, ge=1, description="Overrides the manifest.")
    mode: Literal["nash", "so"] | None = Field(default=None, description="Overrides the manifest.")
    out: Path = Field(default=Path("out"), description="Output directory.")

    def cli_cmd(self) -> None:
        scenario = load_scenario(self.manifest)
        config = RelaxationConfig(
            mode=self.mode or scenario.mode,
            iterations=self.iterations or scenario.iterations,
            replan_fraction=scenario.replan_fraction,
            rng_seed=scenario.seed,
        )
        result = relax(scenario, config, CaConfig(rng_seed=scenario.seed))
        self.out.mkdir(parents=True, exist_ok=True)
        write_history(result.history, self.out / "history.csv")
        write_ndjson(result.last_run.events, self.out / "events.ndjson")
        write_stats(travel_time_stats(result.last_run.events), self.out / "stats.csv")
        LOGGER.info(
            "Relaxation written",
            extra={"out": str(self.out), "iterations": len(result.history)},
        )


class StatsCommand(BaseModel):
    """Travel-time statistics of an event log."""

    log: CliPositionalArg[Path]
    segments: Path | None = Field(default=None, description="Segments CSV.")
    out: Path = Field(default=Path("stats.csv"), description="Output CSV.")

    def cli_cmd(self) -> None:
        segments = load_segments(self.segments) if self.segments else [DEFAULT_SEGMENT]
        rows = travel_time_stats(read_ndjson(self.log), segments)
        write_stats(rows, self.out)
        LOGGER.info("Statistics written", extra={"out": str(self.out), "rows": len(rows)})


class BottleneckCommand(BaseModel):
    """Sweep the bottleneck benchmark over opening widths."""

    omega_min: float = Field(default=0.4, gt=0)
    omega_max: float = Field(default=5.2, gt=0)
    omega_step: float = Field(default=0.4, gt=0)
    agents: int = Field(default=350, ge=1)
    window: str = Field(default="5:35", description="Measurement window start:end in seconds.")
    repetitions: int = Field(default=5, ge=1)
    seed: int = 0
    out: Path = Field(default=Path("bottleneck.csv"), description="Output CSV.")

    @field_validator("window")
    @classmethod
    def _check_window(cls, value: str) -> str:
        _parse_window(value)
        return value

    @property
    def bounds(self) -> tuple[float, float]:
        return _parse_window(self.window)

    def cli_cmd(self) -> None:
        start, end = self.bounds
        config = BottleneckConfig(
            omega_min=self.omega_min,
            omega_max=self.omega_max,
            omega_step=self.omega_step,
            agents=self.agents,
            window_start=start,
            window_end=end,
            repetitions=self.repetitions,
            rng_seed=self.seed,
        )
        results = bottleneck_sweep(config, CaConfig(rng_seed=self.seed))
        write_bottleneck(results, self.out)
        LOGGER.info("Bottleneck sweep written", extra={"out": str(self.out)})


class CycleReportCommand(BaseModel):
    """Landing-cycle totals of an event log."""

    log: CliPositionalArg[Path]
    cycles: list[str] = Field(default_factory=list, description="Cycles to report even if empty.")
    out: Path = Field(default=Path("cycles.csv"), description="Output CSV.")

    def cli_cmd(self) -> None:
        summaries = landing_cycle_report(read_ndjson(self.log), self.cycles)
        write_cycle_report(summaries, self.out)
        LOGGER.info("Cycle report written", extra={"out": str(self.out)})


class SyntheticCommand(BaseModel):
    """Write the synthetic two-terminal scenario documents."""

    directory: CliPositionalArg[Path]
    preset: str = "observed_peak"

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: str) -> str:
        if value not in DEMAND_PRESETS:
            raise ValueError(f"unknown preset {value!r}; choose from {sorted(DEMAND_PRESETS)}")
        return value

    def cli_cmd(self) -> None:
        write_synthetic_scenario(self.directory, preset=self.preset)


class TerminalSimCli(BaseSettings):
    """Multiscale ferry-terminal simulation experiments."""

    simulate: CliSubCommand[SimulateCommand]
    relax: CliSubCommand[RelaxCommand]
    stats: CliSubCommand[StatsCommand]
    bottleneck: CliSubCommand[BottleneckCommand]
    cycle_report: CliSubCommand[CycleReportCommand] = Field(alias="cycle-report")
    synthetic: CliSubCommand[SyntheticCommand]

    model_config = SettingsConfigDict(
        cli_prog_name="terminalsim",
        cli_kebab_case=True,
        env_prefix="TERMINALSIM_CLI_",
    )

    def cli_cmd(self) -> None:
        CliApp.run_subcommand(self)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line; returns the process exit status."""
    configure_logging()
    try:
        CliApp.run(TerminalSimCli, cli_args=list(argv) if argv is not None else None)
    except (TerminalSimError, ValidationError, SettingsError, FileNotFoundError) as exc:
        LOGGER.error("Command failed", extra={"error": str(exc)})
        return EXIT_INVALID
    return EXIT_OK
