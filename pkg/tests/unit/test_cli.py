"""Tests for the command line."""

import csv
import logging
from pathlib import Path

import pytest

from terminalsim.cli import (
    EXIT_INVALID,
    EXIT_OK,
    LoggingSettings,
    configure_logging,
    main,
)
from terminalsim.environment import GridEnvironment
from terminalsim.meso import LinkSpec
from terminalsim.multiscale import read_ndjson
from terminalsim.scenario import DemandEntry, assemble, write_scenario


@pytest.fixture(autouse=True)
def restore_package_logger():
    """configure_logging replaces the handlers of the package logger."""
    logger = logging.getLogger("terminalsim")
    handlers, level, propagate = list(logger.handlers), logger.level, logger.propagate
    yield
    logger.handlers[:] = handlers
    logger.setLevel(level)
    logger.propagate = propagate


@pytest.fixture
def manifest(corridor: GridEnvironment, tmp_path: Path) -> Path:
    """Corridor scenario with two walkers continuing over a queue link."""
    link = LinkSpec(
        id="L",
        from_node="EAST",
        to_node="FAR",
        length_m=10.0,
        area_m2=40.0,
        free_speed=1.0,
        flow_capacity=1.0,
    )
    demand = [
        DemandEntry(agent_id=f"a{n}", origin="WEST", destination="FAR", departure=n, group="g")
        for n in range(2)
    ]
    scenario = assemble([corridor], [link], [], demand, 300.0, seed=5)
    return write_scenario(scenario, tmp_path / "scenario")


# Logging


def test_level_from_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("TERMINALSIM_LOG_LEVEL", "debug")

    assert LoggingSettings().level == "DEBUG"


def test_configure():
    configure_logging(LoggingSettings(level="WARNING"))

    logger = logging.getLogger("terminalsim")
    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1
    assert not logger.propagate


# Subcommands


def test_simulate_then_stats(manifest: Path, tmp_path: Path):
    out = tmp_path / "out"

    assert main(["simulate", str(manifest), "--out", str(out)]) == EXIT_OK

    events = read_ndjson(out / "events.ndjson")
    assert {event.data.agent_id for event in events} == {"a0", "a1"}
    with (out / "stats.csv").open(newline="") as handle:
        (row,) = csv.DictReader(handle)
    assert (row["group"], row["n"]) == ("g", "2")

    stats = tmp_path / "again.csv"
    assert main(["stats", str(out / "events.ndjson"), "--out", str(stats)]) == EXIT_OK
    assert stats.read_text() == (out / "stats.csv").read_text()


def test_relax(manifest: Path, tmp_path: Path):
    out = tmp_path / "out"

    status = main(["relax", str(manifest), "--iterations", "2", "--out", str(out)])

    assert status == EXIT_OK
    with (out / "history.csv").open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert [row["iteration"] for row in rows] == ["1", "2"]
    assert (out / "events.ndjson").exists()


def test_cycle_report_without_tags(manifest: Path, tmp_path: Path):
    out = tmp_path / "out"
    main(["simulate", str(manifest), "--out", str(out)])
    log = str(out / "events.ndjson")

    status = main(["cycle-report", log, "--out", str(tmp_path / "c.csv")])

    assert status == EXIT_INVALID


def test_bottleneck(tmp_path: Path):
    out = tmp_path / "bottleneck.csv"
    args = ["--omega-min", "1.2", "--omega-max", "1.2", "--agents", "10", "--window", "0:30"]

    status = main(["bottleneck", *args, "--out", str(out)])

    assert status == EXIT_OK
    with out.open(newline="") as handle:
        (row,) = csv.DictReader(handle)
    assert row["omega_m"] == "1.20"
    assert row["crossings"] == "10"


def test_synthetic(tmp_path: Path):
    assert main(["synthetic", str(tmp_path), "--preset", "projection_2017"]) == EXIT_OK
    assert (tmp_path / "scenario.manifest").exists()
    assert (tmp_path / "environments" / "WH.env").exists()


def test_missing_manifest(tmp_path: Path):
    assert main(["simulate", str(tmp_path / "nope.manifest")]) == EXIT_INVALID


def test_bad_window():
    assert main(["bottleneck", "--window", "thirty"]) == EXIT_INVALID


def test_unknown_preset(tmp_path: Path):
    assert main(["synthetic", str(tmp_path), "--preset", "rush_hour"]) == EXIT_INVALID
