"""Landing-cycle totals: disembarking then boarding, as one sequential process.

Agents are assigned to cycles through their demand tag ``<cycle>:<phase>``
with phase ``disembark`` or ``board``. Per agent, disembarking lasts from
the landing (the agent's departure at the pier) to ``arrive``; boarding from
passing the gate (``gate``) to entering the ferry (first meso ``enter``). A
cycle takes the longest disembarking plus the longest boarding time.
"""

import csv
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from ..domain import (
    AgentArrived,
    AgentDeparted,
    EdgeEntered,
    Event,
    GatePassed,
    SimulationEvent,
)
from ..domain.exceptions import MissingCycleTagError

LOGGER = logging.getLogger(__name__)

DISEMBARK = "disembark"
BOARD = "board"
LANDING_INTERVAL_S = 480.0
"""Scheduled time between two landings at a slip (eight minutes)."""


@dataclass(frozen=True, slots=True)
class CycleSummary:
    """Durations of one landing cycle.

    ``*_demand`` counts the agents tagged with a phase, ``*_agents`` those
    that completed it. Durations only describe the completed agents.
    """

    cycle: str
    disembark_demand: int
    disembark_agents: int
    board_demand: int
    board_agents: int
    disembark_s: float
    board_s: float

    @property
    def total_s(self) -> float:
        return self.disembark_s + self.board_s

    @property
    def incomplete(self) -> int:
        return self.disembark_demand - self.disembark_agents + self.board_demand - self.board_agents

    @property
    def exceeds_interval(self) -> bool:
        return self.total_s > LANDING_INTERVAL_S


def _phase_of(tag: str) -> tuple[str, str] | None:
    cycle, sep, phase = tag.rpartition(":")
    if not sep or not cycle or phase not in (DISEMBARK, BOARD):
        return None
    return cycle, phase


def landing_cycle_report(
    events: Iterable[Event[SimulationEvent]], cycles: Sequence[str] = ()
) -> list[CycleSummary]:
    """Summaries for every tagged cycle, plus the explicitly requested ``cycles``.

    Raises:
        MissingCycleTagError: If no cycle is requested and no agent carries a
            ``<cycle>:<phase>`` tag.
    """
    events = list(events)
    membership: dict[str, tuple[str, str]] = {}
    starts: dict[str, float] = {}
    # departures may sort after same-time events of other sources
    for event in events:
        data = event.data
        if isinstance(data, AgentDeparted):
            phase = _phase_of(data.group)
            if phase is None:
                continue
            membership[data.agent_id] = phase
            if phase[1] == DISEMBARK:
                starts[data.agent_id] = event.time

    durations: dict[tuple[str, str], list[float]] = defaultdict(list)
    counted: set[str] = set()
    for event in events:
        data = event.data
        agent_id = data.agent_id
        if agent_id not in membership or agent_id in counted:
            continue
        phase = membership[agent_id][1]
        if phase == DISEMBARK:
            if isinstance(data, AgentArrived):
                durations[membership[agent_id]].append(event.time - starts[agent_id])
                counted.add(agent_id)
        elif isinstance(data, GatePassed):
            starts.setdefault(agent_id, event.time)
        elif isinstance(data, EdgeEntered) and data.scale == "meso" and agent_id in starts:
            durations[membership[agent_id]].append(event.time - starts[agent_id])
            counted.add(agent_id)

    demand = Counter(membership.values())
    names = sorted({cycle for cycle, _ in membership.values()} | set(cycles))
    if not names:
        raise MissingCycleTagError("no agent carries a <cycle>:<phase> group tag")
    summaries = []
    for name in names:
        disembark = durations.get((name, DISEMBARK), [])
        board = durations.get((name, BOARD), [])
        summary = CycleSummary(
            cycle=name,
            disembark_demand=demand[(name, DISEMBARK)],
            disembark_agents=len(disembark),
            board_demand=demand[(name, BOARD)],
            board_agents=len(board),
            disembark_s=max(disembark, default=0.0),
            board_s=max(board, default=0.0),
        )
        if summary.incomplete:
            LOGGER.warning(
                "Landing cycle incomplete",
                extra={
                    "cycle": name,
                    "incomplete": summary.incomplete,
                    "disembark_demand": summary.disembark_demand,
                    "board_demand": summary.board_demand,
                },
            )
        if summary.exceeds_interval:
            LOGGER.warning(
                "Landing cycle longer than the landing interval",
                extra={"cycle": name, "total_s": summary.total_s},
            )
        summaries.append(summary)
    return summaries


CYCLE_COLUMNS = (
    "cycle",
    "disembark_demand",
    "disembark_agents",
    "board_demand",
    "board_agents",
    "incomplete",
    "disembark_s",
    "board_s",
    "total_s",
)


def write_cycle_report(summaries: list[CycleSummary], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CYCLE_COLUMNS)
        for summary in summaries:
            writer.writerow(
                [
                    summary.cycle,
                    summary.disembark_demand,
                    summary.disembark_agents,
                    summary.board_demand,
                    summary.board_agents,
                    summary.incomplete,
                    f"{summary.disembark_s:.6f}",
                    f"{summary.board_s:.6f}",
                    f"{summary.total_s:.6f}",
                ]
            )
    return path
