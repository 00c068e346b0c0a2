"""Gate schedules: the time windows in which a scheduled target is open."""

import bisect
import csv
import logging
from collections import defaultdict
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..domain.exceptions import ScenarioError

LOGGER = logging.getLogger(__name__)

SCHEDULE_COLUMNS = ("schedule_id", "open_s", "close_s")


class GateSchedule(BaseModel):
    """Ordered, disjoint opening windows of one gate.

    Windows are half-open: a gate with window ``(90, 200)`` is open for
    ``90 <= t < 200``.

    Example:
        >>> schedule = GateSchedule(id="wh_gate_1", windows=((90.0, 200.0),))
        >>> schedule.is_open(100.0)
        True
        >>> schedule.next_opening(50.0)
        90.0
    """

    model_config = ConfigDict(frozen=True)

    id: str
    windows: tuple[tuple[float, float], ...]

    @model_validator(mode="after")
    def _check_windows(self) -> "GateSchedule":
        previous_close = float("-inf")
        for open_s, close_s in self.windows:
            if not open_s < close_s:
                raise ValueError(f"schedule {self.id!r}: window ({open_s}, {close_s}) is empty")
            if open_s < previous_close:
                raise ValueError(f"schedule {self.id!r}: overlapping schedule windows")
            previous_close = close_s
        return self

    def is_open(self, t: float) -> bool:
        index = bisect.bisect_right([w[0] for w in self.windows], t) - 1
        return index >= 0 and t < self.windows[index][1]

    def next_opening(self, t: float) -> float | None:
        """Earliest time >= ``t`` at which the gate is open, or None if exhausted."""
        for open_s, close_s in self.windows:
            if t < close_s:
                return max(open_s, t)
        return None


def load_schedules(path: Path | str) -> list[GateSchedule]:
    """Read a schedules CSV (``schedule_id,open_s,close_s``, one window per row).

    Raises:
        ScenarioError: On a missing column, a bad number or overlapping windows.
    """
    windows: dict[str, list[tuple[float, float]]] = defaultdict(list)
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or set(SCHEDULE_COLUMNS) - set(reader.fieldnames):
            raise ScenarioError(f"{path}: schedules header must be {','.join(SCHEDULE_COLUMNS)}")
        for number, row in enumerate(reader, start=2):
            try:
                windows[row["schedule_id"]].append((float(row["open_s"]), float(row["close_s"])))
            except ValueError:
                raise ScenarioError(f"{path}: line {number}: invalid window") from None
    try:
        schedules = [
            GateSchedule(id=schedule_id, windows=tuple(sorted(items)))
            for schedule_id, items in windows.items()
        ]
    except ValidationError as exc:
        raise ScenarioError(f"{path}: {exc.errors()[0]['msg']}") from None
    LOGGER.debug("Loaded schedules", extra={"path": str(path), "schedules": len(schedules)})
    return schedules


def write_schedules(schedules: list[GateSchedule], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCHEDULE_COLUMNS)
        for schedule in schedules:
            for open_s, close_s in schedule.windows:
                writer.writerow([schedule.id, repr(open_s), repr(close_s)])
    return path
