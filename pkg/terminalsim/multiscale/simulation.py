"""The coupled simulation: micro environments and meso links on one clock.

Every global step ``k`` covers ``[t_k, t_k+1)`` with ``t_k = k * timestep``
(rounded to 6 decimals) and runs, in order:

1. departures with ``departure <= t_k``,
2. every micro environment with agents, in ascending id, up to ``t_k+1``,
3. every meso link, in ascending id, up to ``t_k+1``,
4. node queues, holding agents and link entry queues at ``t_k+1``.

Agents cross scales at nodes. Agents released from a link into an
environment wait in a FIFO queue at the node until a cell of the border
target is free; agents that finished their route in an environment stay on
their cell until the next link accepts them.
"""

import logging
import math
from collections import defaultdict, deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Protocol

import numpy as np

from ..domain import (
    AgentAborted,
    AgentArrived,
    AgentDeparted,
    AgentStranded,
    EdgeEntered,
    EdgeLeft,
    Event,
    EventSource,
    Plan,
    SimulationEvent,
)
from ..domain.exceptions import PlanCorruptError
from ..environment import FloorField, GridEnvironment
from ..meso import LinkSpec, MesoLink
from ..micro import CaConfig, GateSchedule, MicroAgentState, MicroSimulation
from .congestion import CongestionTracker, TravelRecord
from .graph import GlobalGraph, Leg
from .log import EventLog

LOGGER = logging.getLogger(__name__)

DEMAND_SOURCE = "demand"
NETWORK_SOURCE = "network"


class OccupancyObserver(Protocol):
    """Receives the occupancy grid of an environment after each of its steps."""

    def observe(self, t: float, occupancy: np.ndarray) -> float: ...


class AgentStatus(str, Enum):
    NOT_DEPARTED = "not_departed"
    AT_NODE = "at_node"
    MICRO = "micro"
    MESO = "meso"
    ARRIVED = "arrived"
    STRANDED = "stranded"
    ABORTED = "aborted"

    @property
    def finished(self) -> bool:
        return self in (AgentStatus.ARRIVED, AgentStatus.STRANDED, AgentStatus.ABORTED)


@dataclass(slots=True)
class AgentRun:
    plan: Plan
    legs: list[Leg] = field(default_factory=list)
    leg_index: int = 0
    status: AgentStatus = AgentStatus.NOT_DEPARTED
    edge_entered_at: float = 0.0
    finished_at: float | None = None

    @property
    def agent_id(self) -> str:
        return self.plan.agent_id

    @property
    def leg(self) -> Leg:
        return self.legs[self.leg_index]

    @property
    def next_leg(self) -> Leg | None:
        index = self.leg_index + 1
        return self.legs[index] if index < len(self.legs) else None


@dataclass
class SimulationResult:
    """Outcome of one run.

    Attributes:
        events: The merged event stream.
        tracker: Congestion states and travel records rebuilt from the events.
        statuses: Final status per agent.
        arrival_times: Arrival time per arrived agent.
        incomplete: Agents not finished when the run ended.
        end_time: Time the run stopped (``sim_end`` or earlier when empty).
        sim_end: Configured end of the run.
    """

    events: list[Event[SimulationEvent]]
    tracker: CongestionTracker
    statuses: dict[str, AgentStatus]
    arrival_times: dict[str, float]
    incomplete: list[str]
    end_time: float
    sim_end: float

    @property
    def records(self) -> list[TravelRecord]:
        return self.tracker.records

    def records_by_agent(self) -> dict[str, list[TravelRecord]]:
        return self.tracker.records_by_agent()


class MultiscaleSimulation:
    """Runs a set of plans through the coupled micro and meso models.

    A fresh instance is needed per run; environments, link parameters and
    navigation fields can be shared between instances.

    Args:
        graph: The global graph.
        environments: Micro environments, all bound in ``graph``.
        links: Meso link parameters.
        schedules: Gate schedules by id.
        sim_end: End of the simulated period in seconds.
        config: CA parameters; ``config.timestep`` is the global timestep.
        navigation_fields: Precomputed navigation fields per environment id.
        observers: Occupancy observers per environment id, e.g. a
            :class:`~terminalsim.metrics.DensityProbe`.
    """

    def __init__(
        self,
        graph: GlobalGraph,
        environments: Iterable[GridEnvironment],
        links: Iterable[LinkSpec],
        schedules: Mapping[str, GateSchedule],
        sim_end: float,
        config: CaConfig | None = None,
        navigation_fields: Mapping[str, Mapping[str, FloorField]] | None = None,
        observers: Mapping[str, OccupancyObserver] | None = None,
    ):
        if sim_end <= 0:
            raise ValueError("sim_end must be positive")
        self.graph = graph
        self.config = config if config is not None else CaConfig()
        self.sim_end = sim_end
        ordered = sorted(environments, key=lambda e: e.id)
        rngs = np.random.default_rng(self.config.rng_seed).spawn(len(ordered))
        self.environments = {
            env.id: MicroSimulation(
                env,
                self.config,
                schedules,
                rng=rng,
                fields=navigation_fields.get(env.id) if navigation_fields else None,
            )
            for env, rng in zip(ordered, rngs)
        }
        self.links = {spec.id: MesoLink(spec) for spec in sorted(links, key=lambda s: s.id)}
        self.log = EventLog()
        self.runs: dict[str, AgentRun] = {}
        self._node_queues: dict[tuple[str, str], deque[str]] = defaultdict(deque)
        self._entry_queues: dict[str, deque[str]] = defaultdict(deque)
        self._demand = EventSource(DEMAND_SOURCE)
        self._network = EventSource(NETWORK_SOURCE)
        self._active = 0
        self._observers = dict(observers or {})

    def run(self, plans: Iterable[Plan]) -> SimulationResult:
        """Simulate ``plans`` until every agent finished or ``sim_end`` is reached."""
        pending = deque(sorted(plans, key=lambda p: (p.departure, p.agent_id)))
        for plan in pending:
            self.runs[plan.agent_id] = AgentRun(plan)
        dt = self.config.timestep
        steps = math.ceil(self.sim_end / dt - 1e-9)
        LOGGER.info(
            "Simulation started",
            extra={"agents": len(pending), "sim_end": self.sim_end, "timestep": dt},
        )

        end_time = 0.0
        for k in range(steps):
            t_now = round(k * dt, 6)
            t_next = round((k + 1) * dt, 6)
            while pending and pending[0].departure <= t_now + 1e-9:
                self._depart(self.runs[pending.popleft().agent_id], t_now)
            for env_id, sim in self.environments.items():
                if len(sim):
                    self._record_micro(sim.step(t_next), t_next)
                    if env_id in self._observers:
                        self._observers[env_id].observe(t_next, sim.occupancy_grid())
            for link in self.links.values():
                link.advance(t_next, dt, accept=partial(self._accept, link, t=t_next))
            self._drain(t_next)
            end_time = t_next
            if not pending and self._active == 0:
                break

        statuses = {agent_id: run.status for agent_id, run in self.runs.items()}
        incomplete = sorted(a for a, status in statuses.items() if not status.finished)
        if incomplete:
            LOGGER.warning(
                "Agents still in the system at end of run",
                extra={"incomplete": len(incomplete), "end_time": end_time},
            )
        events = self.log.merged()
        tracker = CongestionTracker(self.graph.free_costs(), tolerance=dt)
        tracker.replay(events).finalize(self.sim_end)
        arrival_times = {
            agent_id: run.finished_at
            for agent_id, run in self.runs.items()
            if run.status is AgentStatus.ARRIVED and run.finished_at is not None
        }
        LOGGER.info(
            "Simulation finished",
            extra={
                "end_time": end_time,
                "arrived": len(arrival_times),
                "events": len(events),
                "incomplete": len(incomplete),
            },
        )
        return SimulationResult(
            events=events,
            tracker=tracker,
            statuses=statuses,
            arrival_times=arrival_times,
            incomplete=incomplete,
            end_time=end_time,
            sim_end=self.sim_end,
        )

    # Agent lifecycle

    def _depart(self, run: AgentRun, t: float) -> None:
        plan = run.plan
        self._active += 1
        self.log.append(
            [
                self._demand.emit(
                    t, AgentDeparted(agent_id=plan.agent_id, node=plan.origin, group=plan.group)
                )
            ]
        )
        try:
            run.legs = self.graph.legs(plan)
        except PlanCorruptError as exc:
            self._abort(run, plan.origin, str(exc), t)
            return
        if not run.legs:
            self._arrive(run, plan.origin, t)
            return
        self._start_leg(run, t)
        if run.status is AgentStatus.AT_NODE:
            leg = run.leg
            self._place_waiting((leg.start_node, leg.env_id or ""), t)

    def _start_leg(self, run: AgentRun, t: float) -> None:
        leg = run.leg
        if leg.kind == "micro":
            run.status = AgentStatus.AT_NODE
            self._node_queues[(leg.start_node, leg.env_id or "")].append(run.agent_id)
            return
        link_id = leg.link_id or ""
        if not self._entry_queues[link_id] and self._enter_link(run, link_id, t):
            return
        run.status = AgentStatus.AT_NODE
        self._entry_queues[link_id].append(run.agent_id)

    def _enter_link(self, run: AgentRun, link_id: str, t: float) -> bool:
        if not self.links[link_id].try_enter(run.agent_id, t):
            return False
        run.status = AgentStatus.MESO
        run.edge_entered_at = t
        self.log.append(
            [
                self._network.emit(
                    t, EdgeEntered(agent_id=run.agent_id, edge_id=link_id, scale="meso")
                )
            ]
        )
        return True

    def _accept(self, link: MesoLink, agent_id: str, t: float) -> bool:
        """Hand an agent released by ``link`` to whatever follows in its plan."""
        run = self.runs[agent_id]
        upcoming = run.next_leg
        if upcoming is not None and upcoming.kind == "meso":
            downstream = upcoming.link_id or ""
            if self._entry_queues[downstream] or not self.links[downstream].has_room():
                return False
        self.log.append(
            [
                self._network.emit(
                    t,
                    EdgeLeft(agent_id=agent_id, edge_id=link.id, entered_at=run.edge_entered_at),
                )
            ]
        )
        if upcoming is None:
            self._arrive(run, link.spec.to_node, t)
            return True
        run.leg_index += 1
        self._start_leg(run, t)
        return True

    def _drain(self, t: float) -> None:
        for key in sorted(k for k, queue in self._node_queues.items() if queue):
            self._place_waiting(key, t)
        for sim in self.environments.values():
            for state in sim.holding():
                self._hand_off(sim, state, t)
        for link_id in sorted(k for k, queue in self._entry_queues.items() if queue):
            queue = self._entry_queues[link_id]
            while queue and self._enter_link(self.runs[queue[0]], link_id, t):
                queue.popleft()

    def _place_waiting(self, key: tuple[str, str], t: float) -> None:
        queue = self._node_queues[key]
        sim = self.environments[key[1]]
        while queue:
            run = self.runs[queue[0]]
            leg = run.leg
            events = sim.place(run.agent_id, leg.start_target or "", list(leg.route), t)
            if events is None:
                return
            queue.popleft()
            run.status = AgentStatus.MICRO
            self.log.append(events)

    def _hand_off(self, sim: MicroSimulation, state: MicroAgentState, t: float) -> None:
        run = self.runs[state.agent_id]
        upcoming = run.next_leg
        if upcoming is None:
            sim.release(state.agent_id)
            self._arrive(run, run.leg.end_node, t)
            return
        if upcoming.kind != "meso":
            sim.release(state.agent_id)
            self._abort(run, run.leg.end_node, "plan continues in another environment", t)
            return
        link_id = upcoming.link_id or ""
        if self._entry_queues[link_id] or not self.links[link_id].has_room():
            return
        sim.release(state.agent_id)
        run.leg_index += 1
        self._enter_link(run, link_id, t)

    def _record_micro(self, events: list[Event[SimulationEvent]], t: float) -> None:
        self.log.append(events)
        for event in events:
            if isinstance(event.data, AgentStranded):
                self._finish(self.runs[event.data.agent_id], AgentStatus.STRANDED, t)

    def _arrive(self, run: AgentRun, node: str, t: float) -> None:
        self.log.append([self._network.emit(t, AgentArrived(agent_id=run.agent_id, node=node))])
        self._finish(run, AgentStatus.ARRIVED, t)

    def _abort(self, run: AgentRun, node: str, reason: str, t: float) -> None:
        LOGGER.warning(
            "Agent aborted", extra={"agent_id": run.agent_id, "node": node, "reason": reason}
        )
        self.log.append(
            [self._network.emit(t, AgentAborted(agent_id=run.agent_id, node=node, reason=reason))]
        )
        self._finish(run, AgentStatus.ABORTED, t)

    def _finish(self, run: AgentRun, status: AgentStatus, t: float) -> None:
        run.status = status
        run.finished_at = t
        self._active -= 1
