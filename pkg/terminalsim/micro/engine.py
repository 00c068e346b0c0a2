"""Floor-field cellular automaton for one grid environment.

One call to :meth:`MicroSimulation.step` advances every agent of the
environment by one timestep:

1. mode updates (delays ending, gates opening or closing in front of an agent),
2. moves, in a random permutation of the agents, onto cells that are free at
   the time of the move,
3. arrivals on targets, in the same permutation order.

An agent whose desired cell was claimed earlier in the same step stays put.
With ``conflict_friction`` the claimer is also sent back to its origin.

Cells of scheduled targets are walls to every agent except those heading
for that gate or standing on it. Closed gates are walls to all.
"""

import logging
import math
from collections.abc import Callable, Mapping
from enum import Enum

import numpy as np

from ..domain import (
    AgentMoved,
    AgentPlaced,
    AgentStranded,
    Cell,
    DelayStarted,
    EdgeEntered,
    EdgeLeft,
    Event,
    EventSource,
    GatePassed,
    GateWaitStarted,
    SimulationEvent,
    TargetReached,
)
from ..domain.exceptions import ScenarioError
from ..environment import (
    FloorField,
    GridEnvironment,
    Target,
    TargetKind,
    compute_floor_fields,
    micro_edge_id,
    step_allowed,
)
from ..environment.floor_field import DIAGONAL_STEP, NEIGHBOURHOOD
from .config import CaConfig
from .schedule import GateSchedule
from .state import AgentMode, MicroAgentState

LOGGER = logging.getLogger(__name__)

_TIE = 1e-9


class GateDecision(str, Enum):
    PASS = "pass"
    WAIT = "wait"
    STRANDED = "stranded"


def choose_move(
    agent: MicroAgentState,
    env: GridEnvironment,
    field: FloorField,
    rng: np.random.Generator,
    config: CaConfig,
    *,
    is_free: Callable[[Cell], bool] | None = None,
    neighbours: tuple[Cell, ...] | None = None,
) -> Cell | None:
    """Pick the next cell for ``agent`` or None to stay.

    Moving agents go to the free neighbour with the lowest field value if it
    is strictly lower than their own; ties are broken uniformly at random.
    Agents waiting for a gate move with probability
    ``move_probability_waiting`` to a free neighbour drawn with weights
    ``exp(-waiting_wander_weight * (value - lowest value))``.
    """
    if neighbours is None:
        neighbours = _neighbours_of(env, agent.cell)
    free = is_free if is_free is not None else (lambda cell: True)
    table = field.table

    if agent.mode is AgentMode.WAITING_FOR_GATE:
        chance = config.move_probability_waiting
        if chance <= 0.0 or rng.random() >= chance:
            return None
        options = [c for c in neighbours if free(c) and math.isfinite(table[c[0]][c[1]])]
        if not options:
            return None
        values = np.array([table[r][c] for r, c in options])
        weights = np.exp(-config.waiting_wander_weight * (values - values.min()))
        return options[int(rng.choice(len(options), p=weights / weights.sum()))]

    if agent.mode is not AgentMode.MOVING:
        return None

    here = table[agent.cell[0]][agent.cell[1]]
    best = here
    ties: list[Cell] = []
    for cell in neighbours:
        value = table[cell[0]][cell[1]]
        if value >= here - _TIE or not free(cell):
            continue
        if not ties or value < best - _TIE:
            best, ties = value, [cell]
        elif value <= best + _TIE:
            ties.append(cell)
    if not ties:
        return None
    if len(ties) == 1:
        return ties[0]
    return ties[int(rng.integers(len(ties)))]


def apply_delaying_target(
    agent: MicroAgentState, target: Target, t: float, rng: np.random.Generator
) -> float:
    """Sample the delay of ``target`` and return the time the agent may move again.

    A positive delay puts the agent in mode DELAYED.
    """
    delay = target.delay.sample(rng) if target.delay is not None else 0.0
    until = t + delay
    if until > t:
        agent.mode = AgentMode.DELAYED
        agent.delayed_until = until
    return until


def apply_scheduled_target(
    agent: MicroAgentState, target: Target, schedule: GateSchedule, t: float
) -> GateDecision:
    """Decide whether ``agent`` may pass the gate ``target`` at time ``t``.

    Waiting agents that are let through go back to MOVING with the wait
    added to ``gate_wait``; moving agents in front of a closed gate start
    waiting. When no window opens any more the agent is stranded.
    """
    if schedule.is_open(t):
        if agent.mode is AgentMode.WAITING_FOR_GATE:
            since = agent.waiting_since if agent.waiting_since is not None else t
            agent.gate_wait += t - since
            agent.waiting_since = None
            agent.mode = AgentMode.MOVING
        return GateDecision.PASS
    if schedule.next_opening(t) is None:
        return GateDecision.STRANDED
    if agent.mode is AgentMode.MOVING:
        agent.mode = AgentMode.WAITING_FOR_GATE
        agent.waiting_since = t
    return GateDecision.WAIT


def _neighbours_of(env: GridEnvironment, cell: Cell) -> tuple[Cell, ...]:
    return tuple(
        (cell[0] + dr, cell[1] + dc)
        for dr, dc, _ in NEIGHBOURHOOD
        if step_allowed(env, cell, dr, dc)
    )


class MicroSimulation:
    """Agents moving through one grid environment.

    Agents enter with :meth:`place` on a free cell of a start target and
    follow a route of target ids. Once the route is exhausted they are
    HOLDING until the multiscale layer hands them off with :meth:`release`.

    Args:
        env: The environment.
        config: CA parameters.
        schedules: Gate schedules by id; every scheduled target must have one.
        rng: Random generator; defaults to one seeded with ``config.rng_seed``.
        fields: Precomputed navigation fields by target id.

    Raises:
        ScenarioError: If a scheduled target references an unknown schedule.
    """

    def __init__(
        self,
        env: GridEnvironment,
        config: CaConfig | None = None,
        schedules: Mapping[str, GateSchedule] | None = None,
        rng: np.random.Generator | None = None,
        fields: Mapping[str, FloorField] | None = None,
    ):
        self.env = env
        self.config = config if config is not None else CaConfig()
        self.schedules = dict(schedules or {})
        self._gates = [t for t in env.targets if t.kind is TargetKind.SCHEDULED]
        self._gate_of = {cell: gate.id for gate in self._gates for cell in gate.cells}
        for gate in self._gates:
            if gate.schedule_id not in self.schedules:
                raise ScenarioError(
                    f"target {gate.id!r} of environment {env.id!r} references "
                    f"unknown schedule {gate.schedule_id!r}"
                )
        self.rng = rng if rng is not None else np.random.default_rng(self.config.rng_seed)
        self.fields = (
            dict(fields) if fields is not None else compute_floor_fields(env, isolate_targets=False)
        )
        self.agents: dict[str, MicroAgentState] = {}
        self.occupancy: dict[Cell, str] = {}
        rows, cols = np.nonzero(env.traversable)
        self._neighbours = {
            (int(r), int(c)): _neighbours_of(env, (int(r), int(c))) for r, c in zip(rows, cols)
        }
        self._source = EventSource(env.id)

    # Population

    def __len__(self) -> int:
        return len(self.agents)

    def add_agent(
        self,
        agent_id: str,
        cell: Cell,
        route: list[str],
        *,
        previous_target: str,
        t: float = 0.0,
    ) -> MicroAgentState:
        """Put an agent directly on ``cell`` without emitting events."""
        if cell not in self._neighbours:
            raise ValueError(f"cell {cell} is not traversable in {self.env.id!r}")
        if cell in self.occupancy:
            raise ValueError(f"cell {cell} is occupied by {self.occupancy[cell]!r}")
        for target_id in route:
            self.env.target(target_id)
        agent = MicroAgentState(
            agent_id=agent_id,
            cell=cell,
            route=list(route),
            previous_target=previous_target,
            entered_env_at=t,
            edge_entered_at=t,
        )
        if not route:
            agent.mode = AgentMode.HOLDING
            agent.holding_since = t
        self.agents[agent_id] = agent
        self.occupancy[cell] = agent_id
        return agent

    def place(
        self, agent_id: str, start_target: str, route: list[str], t: float
    ) -> list[Event[SimulationEvent]] | None:
        """Place an agent on the free cell of ``start_target`` nearest to its first target.

        Returns the emitted events, or None if every cell of the start target
        is occupied.
        """
        if not route:
            raise ValueError(f"agent {agent_id!r} entered {self.env.id!r} without a route")
        start = self.env.target(start_target)
        table = self.fields[route[0]].table
        free = [cell for cell in start.sorted_cells() if cell not in self.occupancy]
        if not free:
            return None
        cell = min(free, key=lambda c: (table[c[0]][c[1]], c))
        self.add_agent(agent_id, cell, route, previous_target=start_target, t=t)
        events: list[Event[SimulationEvent]] = []
        self._emit(
            events,
            t,
            AgentPlaced(
                agent_id=agent_id,
                node=self.env.node_of(start_target),
                env_id=self.env.id,
                target_id=start_target,
                cell=cell,
            ),
        )
        self._emit(
            events,
            t,
            EdgeEntered(
                agent_id=agent_id,
                edge_id=micro_edge_id(self.env.id, start_target, route[0]),
                scale="micro",
            ),
        )
        return events

    def release(self, agent_id: str) -> MicroAgentState:
        agent = self.agents.pop(agent_id)
        del self.occupancy[agent.cell]
        return agent

    def holding(self) -> list[MicroAgentState]:
        """Agents that completed their route, longest holding first."""
        parked = [a for a in self.agents.values() if a.mode is AgentMode.HOLDING]
        return sorted(parked, key=lambda a: a.holding_since or 0.0)

    def occupancy_grid(self) -> np.ndarray:
        grid = np.zeros(self.env.shape, dtype=bool)
        for row, col in self.occupancy:
            grid[row, col] = True
        return grid

    # Stepping

    def step(self, t: float) -> list[Event[SimulationEvent]]:
        """Advance all agents by one timestep ending at ``t``."""
        events: list[Event[SimulationEvent]] = []
        if not self.agents:
            return events
        ids = list(self.agents)
        order = [ids[i] for i in self.rng.permutation(len(ids))]

        for agent_id in order:
            agent = self.agents.get(agent_id)
            if agent is not None:
                self._update_mode(agent, t, events)

        closed = self._closed_gate_cells(t)
        gate_of = self._gate_of
        occupancy = self.occupancy
        claimed: dict[Cell, str] = {}
        origins: dict[str, Cell] = {}
        passable: tuple[str | None, ...] = (None,)

        def open_and_empty(cell: Cell) -> bool:
            return cell not in occupancy and cell not in closed and gate_of.get(cell) in passable

        def open_or_contested(cell: Cell) -> bool:
            return (
                (cell not in occupancy or cell in claimed)
                and cell not in closed
                and gate_of.get(cell) in passable
            )

        for agent_id in order:
            agent = self.agents.get(agent_id)
            if agent is None:
                continue
            if agent.mode is AgentMode.MOVING:
                is_free = open_or_contested
            elif agent.mode is AgentMode.WAITING_FOR_GATE:
                is_free = open_and_empty
            else:
                continue
            target_id = agent.current_target
            if target_id is None:
                continue
            passable = (None, target_id, gate_of.get(agent.cell))
            move = choose_move(
                agent,
                self.env,
                self.fields[target_id],
                self.rng,
                self.config,
                is_free=is_free,
                neighbours=self._neighbours[agent.cell],
            )
            if move is None:
                continue
            if move in claimed:
                self._resolve_conflict(move, claimed, origins)
                continue
            origins[agent_id] = agent.cell
            del occupancy[agent.cell]
            occupancy[move] = agent_id
            agent.cell = move
            claimed[move] = agent_id

        for agent_id in order:
            origin = origins.get(agent_id)
            agent = self.agents.get(agent_id)
            if origin is None or agent is None or agent.cell == origin:
                continue
            if self.config.log_moves:
                self._emit(
                    events,
                    t,
                    AgentMoved(
                        agent_id=agent_id, env_id=self.env.id, from_cell=origin, to_cell=agent.cell
                    ),
                )
            if (
                agent.mode is AgentMode.MOVING
                and agent.current_target is not None
                and self.env.target_at(agent.cell) == agent.current_target
            ):
                self._reach_target(agent, t, events)
        return events

    def _update_mode(
        self, agent: MicroAgentState, t: float, events: list[Event[SimulationEvent]]
    ) -> None:
        if agent.mode is AgentMode.DELAYED:
            if agent.delayed_until is not None and agent.delayed_until <= t + _TIE:
                agent.delayed_until = None
                if agent.current_target is None:
                    agent.mode = AgentMode.HOLDING
                    agent.holding_since = t
                else:
                    agent.mode = AgentMode.MOVING
            return
        target_id = agent.current_target
        if target_id is None or agent.mode is AgentMode.HOLDING:
            return
        target = self.env.target(target_id)
        if target.kind is not TargetKind.SCHEDULED or target.schedule_id is None:
            return
        if agent.mode is AgentMode.MOVING and not self._in_front_of(agent, target_id):
            return
        was_moving = agent.mode is AgentMode.MOVING
        decision = apply_scheduled_target(agent, target, self.schedules[target.schedule_id], t)
        if decision is GateDecision.STRANDED:
            self._strand(agent, target_id, t, events)
        elif decision is GateDecision.WAIT and was_moving:
            self._emit(
                events,
                t,
                GateWaitStarted(agent_id=agent.agent_id, env_id=self.env.id, target_id=target_id),
            )

    def _in_front_of(self, agent: MicroAgentState, target_id: str) -> bool:
        distance = self.fields[target_id].table[agent.cell[0]][agent.cell[1]]
        return distance <= max(self.config.waiting_distance, DIAGONAL_STEP) + _TIE

    def _closed_gate_cells(self, t: float) -> frozenset[Cell]:
        closed = [
            gate.cells
            for gate in self._gates
            if gate.schedule_id is not None and not self.schedules[gate.schedule_id].is_open(t)
        ]
        return frozenset().union(*closed) if closed else frozenset()

    def _resolve_conflict(
        self, cell: Cell, claimed: dict[Cell, str], origins: dict[str, Cell]
    ) -> None:
        friction = self.config.conflict_friction
        if friction <= 0.0 or self.rng.random() >= friction:
            return
        winner_id = claimed[cell]
        origin = origins[winner_id]
        if origin in self.occupancy:
            return
        del self.occupancy[cell]
        del claimed[cell]
        self.occupancy[origin] = winner_id
        self.agents[winner_id].cell = origin

    def _reach_target(
        self, agent: MicroAgentState, t: float, events: list[Event[SimulationEvent]]
    ) -> None:
        target = self.env.target(agent.current_target or "")
        agent_id = agent.agent_id
        self._emit(
            events, t, TargetReached(agent_id=agent_id, env_id=self.env.id, target_id=target.id)
        )
        self._emit(
            events,
            t,
            EdgeLeft(
                agent_id=agent_id,
                edge_id=micro_edge_id(self.env.id, agent.previous_target, target.id),
                entered_at=agent.edge_entered_at,
                gate_wait=agent.gate_wait,
            ),
        )
        if target.kind is TargetKind.SCHEDULED:
            self._emit(
                events, t, GatePassed(agent_id=agent_id, env_id=self.env.id, target_id=target.id)
            )
        agent.previous_target = target.id
        agent.route_index += 1
        agent.edge_entered_at = t
        agent.gate_wait = 0.0
        upcoming = agent.current_target
        if upcoming is not None:
            self._emit(
                events,
                t,
                EdgeEntered(
                    agent_id=agent_id,
                    edge_id=micro_edge_id(self.env.id, target.id, upcoming),
                    scale="micro",
                ),
            )
        if target.kind is TargetKind.DELAYING:
            until = apply_delaying_target(agent, target, t, self.rng)
            if until > t:
                self._emit(
                    events,
                    t,
                    DelayStarted(
                        agent_id=agent_id, env_id=self.env.id, target_id=target.id, until=until
                    ),
                )
                return
        if upcoming is None:
            agent.mode = AgentMode.HOLDING
            agent.holding_since = t

    def _strand(
        self,
        agent: MicroAgentState,
        target_id: str,
        t: float,
        events: list[Event[SimulationEvent]],
    ) -> None:
        LOGGER.warning(
            "Agent stranded at closed gate",
            extra={"agent_id": agent.agent_id, "env_id": self.env.id, "target_id": target_id},
        )
        self._emit(
            events,
            t,
            AgentStranded(
                agent_id=agent.agent_id,
                env_id=self.env.id,
                target_id=target_id,
                reason="gate schedule exhausted",
            ),
        )
        self.release(agent.agent_id)

    def _emit(
        self, events: list[Event[SimulationEvent]], t: float, payload: SimulationEvent
    ) -> None:
        events.append(self._source.emit(t, payload))
