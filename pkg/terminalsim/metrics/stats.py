"""Travel-time statistics over segments of the event log.

A segment is measured per agent from the first event matching its start
(kind plus glob pattern over the event's edge or node) to the first later
event matching its end. Segments file, CSV::

    group,start_kind,start_ref,end_kind,end_ref
    WH:board,gate,*,enter,*_FERRY
    *,depart,*,arrive,*

A group of ``*`` splits the segment by demand tag.
"""

import csv
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from fnmatch import fnmatchcase
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError

from ..domain import AgentDeparted, Event, SimulationEvent
from ..domain.exceptions import ScenarioError

LOGGER = logging.getLogger(__name__)

SEGMENT_COLUMNS = ("group", "start_kind", "start_ref", "end_kind", "end_ref")
STATS_COLUMNS = ("group", "n", "min", "max", "avg", "var", "sd", "p75", "p95", "total")
ANY_GROUP = "*"


@dataclass(frozen=True, slots=True)
class StatsRow:
    """Summary of one group of durations in seconds; measures are None when n is 0.

    ``total`` is the maximum: processes are described by the time the last
    passenger needs.
    """

    group: str
    n: int
    min: float | None = None
    max: float | None = None
    avg: float | None = None
    var: float | None = None
    sd: float | None = None
    p75: float | None = None
    p95: float | None = None
    total: float | None = None


class Segment(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: str
    start_kind: str
    start_ref: str = "*"
    end_kind: str
    end_ref: str = "*"

    def starts_at(self, data: SimulationEvent) -> bool:
        return data.kind == self.start_kind and fnmatchcase(data.ref, self.start_ref)

    def ends_at(self, data: SimulationEvent) -> bool:
        return data.kind == self.end_kind and fnmatchcase(data.ref, self.end_ref)


DEFAULT_SEGMENT = Segment(group=ANY_GROUP, start_kind="depart", end_kind="arrive")


def nearest_rank(ordered: Sequence[float], p: float) -> float:
    """The ``ceil(p * n)``-th smallest value (1-based) of a sorted sample."""
    if not ordered:
        raise ValueError("nearest rank of an empty sample")
    rank = max(1, math.ceil(p * len(ordered) - 1e-9))
    return ordered[min(rank, len(ordered)) - 1]


def summarize(group: str, durations: Iterable[float]) -> StatsRow:
    """Measures of one group; mean and variance are exact, rounded once to float."""
    ordered = sorted(float(duration) for duration in durations)
    if not ordered:
        return StatsRow(group=group, n=0)
    n = len(ordered)
    exact = [Fraction(value) for value in ordered]
    mean = sum(exact, Fraction(0)) / n
    var = float(sum((value - mean) ** 2 for value in exact) / n)
    return StatsRow(
        group=group,
        n=n,
        min=ordered[0],
        max=ordered[-1],
        avg=float(mean),
        var=var,
        sd=math.sqrt(var),
        p75=nearest_rank(ordered, 0.75),
        p95=nearest_rank(ordered, 0.95),
        total=ordered[-1],
    )


def segment_durations(
    events: Iterable[Event[SimulationEvent]], segment: Segment
) -> dict[str, dict[str, float]]:
    """Durations per group label and agent for one segment."""
    events = list(events)
    groups = {
        event.data.agent_id: event.data.group
        for event in events
        if isinstance(event.data, AgentDeparted)
    }
    started: dict[str, float] = {}
    done: set[str] = set()
    durations: dict[str, dict[str, float]] = defaultdict(dict)
    for event in events:
        data = event.data
        agent_id = data.agent_id
        if agent_id in done:
            continue
        if agent_id not in started:
            if segment.starts_at(data):
                started[agent_id] = event.time
            continue
        if not segment.ends_at(data):
            continue
        done.add(agent_id)
        group = groups.get(agent_id, "")
        if segment.group in (ANY_GROUP, group):
            durations[group][agent_id] = event.time - started[agent_id]
    return dict(durations)


def travel_time_stats(
    events: Iterable[Event[SimulationEvent]], segments: Sequence[Segment] = (DEFAULT_SEGMENT,)
) -> list[StatsRow]:
    """One row per segment group; explicit groups without agents give an empty row."""
    events = list(events)
    rows: list[StatsRow] = []
    for segment in segments:
        per_group = segment_durations(events, segment)
        if segment.group == ANY_GROUP:
            labels = sorted(per_group)
        else:
            labels = [segment.group]
        for label in labels:
            rows.append(summarize(label, per_group.get(label, {}).values()))
    return rows


def load_segments(path: Path | str) -> list[Segment]:
    """Read a segments CSV.

    Raises:
        ScenarioError: On a wrong header or an incomplete row.
    """
    segments: list[Segment] = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != SEGMENT_COLUMNS:
            raise ScenarioError(f"{path}: segments header must be {','.join(SEGMENT_COLUMNS)}")
        for number, row in enumerate(reader, start=2):
            try:
                segments.append(Segment.model_validate(row))
            except ValidationError:
                raise ScenarioError(f"{path}: line {number}: invalid segment") from None
    return segments


def write_stats(rows: Iterable[StatsRow], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=STATS_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in asdict(row).items()})
    return path


def _cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return value
