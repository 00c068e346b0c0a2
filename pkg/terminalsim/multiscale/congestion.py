"""Per-edge congestion states and the external costs they impose.

An edge becomes congested when an agent needs longer than its free travel
time (plus a tolerance of one micro timestep) and is relieved by the next
agent that traverses it within that bound. Every agent that left the edge
while it was congested, including the one that triggered the state,
imposed an external cost equal to the time between its exit and the relief.
"""

import logging
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass

from ..domain import EdgeEntered, EdgeLeft, Event
from ..processing import EventReducer
from ..routing import handles_event

LOGGER = logging.getLogger(__name__)

# Absorbs the 6-decimal rounding of event times
_ROUNDING_SLACK = 1e-6


def external_cost(exit_time: float, relief_time: float) -> float:
    """Seconds between leaving a congested edge and the edge's relief."""
    return max(0.0, relief_time - exit_time)


@dataclass(slots=True)
class TravelRecord:
    """One traversal of an edge by an agent.

    ``unrelieved`` marks an external cost closed at the end of the run
    instead of by an observed relief.
    """

    agent_id: str
    edge_id: str
    enter: float
    exit: float
    external_cost: float = 0.0
    unrelieved: bool = False

    @property
    def travel_time(self) -> float:
        return self.exit - self.enter


@dataclass(slots=True)
class CongestionTransition:
    edge_id: str
    time: float
    congested: bool


class CongestionTracker(EventReducer):
    """Reducer building travel records and congestion states from the event stream.

    Args:
        free_travel_times: Free travel time per edge id.
        tolerance: Comparison tolerance, normally one micro timestep.

    Example:
        >>> tracker = CongestionTracker(graph.free_costs(), tolerance=config.timestep)
        >>> tracker.replay(log.merged()).finalize(sim_end)
        >>> tracker.records[0].external_cost
        0.0
    """

    def __init__(self, free_travel_times: Mapping[str, float], tolerance: float):
        self.free_travel_times = dict(free_travel_times)
        self.tolerance = tolerance + _ROUNDING_SLACK
        self.records: list[TravelRecord] = []
        self.congested_since: dict[str, float] = {}
        self.pending: dict[str, list[TravelRecord]] = defaultdict(list)
        self.transitions: list[CongestionTransition] = []
        self.open_edges: dict[tuple[str, str], float] = {}

    def is_congested(self, edge_id: str) -> bool:
        return edge_id in self.congested_since

    @handles_event
    def on_entered(self, event: Event[EdgeEntered]) -> None:
        self.open_edges[(event.data.agent_id, event.data.edge_id)] = event.time

    @handles_event
    def on_left(self, event: Event[EdgeLeft]) -> None:
        data = event.data
        self.open_edges.pop((data.agent_id, data.edge_id), None)
        record = TravelRecord(
            agent_id=data.agent_id, edge_id=data.edge_id, enter=data.entered_at, exit=event.time
        )
        self.records.append(record)
        self.update_congestion(data.edge_id, data.observed_travel_time(event.time), record)

    def update_congestion(
        self, edge_id: str, observed: float, record: TravelRecord
    ) -> CongestionTransition | None:
        """Apply one exit to the state of ``edge_id``; returns the transition, if any."""
        free = self.free_travel_times.get(edge_id)
        if free is None:
            return None
        slow = observed > free + self.tolerance
        if edge_id in self.congested_since:
            if slow:
                self.pending[edge_id].append(record)
                return None
            for pending in self.pending.pop(edge_id, []):
                pending.external_cost = external_cost(pending.exit, record.exit)
            del self.congested_since[edge_id]
            transition = CongestionTransition(edge_id, record.exit, congested=False)
        elif slow:
            self.congested_since[edge_id] = record.exit
            self.pending[edge_id].append(record)
            transition = CongestionTransition(edge_id, record.exit, congested=True)
        else:
            return None
        self.transitions.append(transition)
        LOGGER.debug(
            "Congestion state changed",
            extra={"edge_id": edge_id, "time": record.exit, "congested": transition.congested},
        )
        return transition

    def finalize(self, sim_end: float) -> "CongestionTracker":
        """Close the costs of edges still congested at the end of the run."""
        for edge_id in sorted(self.pending):
            records = self.pending[edge_id]
            if not records:
                continue
            LOGGER.warning(
                "Edge still congested at end of run",
                extra={"edge_id": edge_id, "pending_exits": len(records), "sim_end": sim_end},
            )
            for record in records:
                record.external_cost = external_cost(record.exit, sim_end)
                record.unrelieved = True
        self.pending.clear()
        return self

    def records_by_agent(self) -> dict[str, list[TravelRecord]]:
        grouped: dict[str, list[TravelRecord]] = defaultdict(list)
        for record in self.records:
            grouped[record.agent_id].append(record)
        return dict(grouped)
