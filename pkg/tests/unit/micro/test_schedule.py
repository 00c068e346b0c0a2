"""Tests for gate schedules."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from terminalsim.domain.exceptions import ScenarioError
from terminalsim.micro import GateSchedule, load_schedules, write_schedules


@pytest.fixture
def schedule() -> GateSchedule:
    return GateSchedule(id="gate", windows=((90.0, 200.0), (500.0, 600.0)))


# Gate schedule


@pytest.mark.parametrize(
    ("t", "expected"),
    [
        (0.0, False),
        (90.0, True),
        (199.999, True),
        (200.0, False),
        (550.0, True),
        (600.0, False),
    ],
)
def test_windows_are_half_open(schedule: GateSchedule, t: float, expected: bool):
    assert schedule.is_open(t) is expected


def test_next_opening(schedule: GateSchedule):
    assert schedule.next_opening(10.0) == 90.0
    assert schedule.next_opening(100.0) == 100.0
    assert schedule.next_opening(250.0) == 500.0
    assert schedule.next_opening(600.0) is None


def test_rejects_empty_window():
    with pytest.raises(ValidationError, match="is empty"):
        GateSchedule(id="g", windows=((10.0, 10.0),))


def test_rejects_overlap():
    with pytest.raises(ValidationError, match="overlapping"):
        GateSchedule(id="g", windows=((0.0, 10.0), (5.0, 20.0)))


# Schedule documents


def test_write_and_load(tmp_path: Path, schedule: GateSchedule):
    other = GateSchedule(id="other", windows=((0.0, 1.5),))
    path = write_schedules([schedule, other], tmp_path / "schedules.csv")

    assert load_schedules(path) == [schedule, other]


def test_rows_are_sorted_per_schedule(tmp_path: Path):
    path = tmp_path / "schedules.csv"
    path.write_text("schedule_id,open_s,close_s\ng,50,60\ng,0,10\n", encoding="utf-8")

    assert load_schedules(path)[0].windows == ((0.0, 10.0), (50.0, 60.0))


def test_bad_number(tmp_path: Path):
    path = tmp_path / "schedules.csv"
    path.write_text("schedule_id,open_s,close_s\ng,soon,60\n", encoding="utf-8")

    with pytest.raises(ScenarioError, match="line 2"):
        load_schedules(path)


def test_overlap_is_scenario_error(tmp_path: Path):
    path = tmp_path / "schedules.csv"
    path.write_text("schedule_id,open_s,close_s\ng,0,60\ng,30,90\n", encoding="utf-8")

    with pytest.raises(ScenarioError, match="overlapping"):
        load_schedules(path)


def test_bad_header(tmp_path: Path):
    path = tmp_path / "schedules.csv"
    path.write_text("id,from,to\n", encoding="utf-8")

    with pytest.raises(ScenarioError, match="header"):
        load_schedules(path)
