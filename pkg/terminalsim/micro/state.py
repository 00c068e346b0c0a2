from dataclasses import dataclass
from enum import Enum

from ..domain import Cell


class AgentMode(str, Enum):
    """Behavioural state of an agent on the grid."""

    MOVING = "moving"
    DELAYED = "delayed"
    WAITING_FOR_GATE = "waiting_for_gate"
    # Parked on the last target of its in-environment route, waiting for hand-off
    HOLDING = "holding"


@dataclass(slots=True)
class MicroAgentState:
    """Position and behaviour of one agent inside a grid environment.

    Attributes:
        agent_id: Identity shared with the multiscale layer.
        cell: Occupied cell.
        route: Targets to visit inside this environment, in order.
        previous_target: Last target reached (the start target on entry).
        entered_env_at: Time the agent was placed in the environment.
        edge_entered_at: Time the agent reached ``previous_target``.
        gate_wait: Seconds spent waiting for closed gates on the current edge.
        delayed_until: End of the current delay (mode DELAYED).
        waiting_since: Start of the current gate wait (mode WAITING_FOR_GATE).
        holding_since: Time the route was completed (mode HOLDING).
    """

    agent_id: str
    cell: Cell
    route: list[str]
    previous_target: str
    entered_env_at: float
    mode: AgentMode = AgentMode.MOVING
    route_index: int = 0
    edge_entered_at: float = 0.0
    gate_wait: float = 0.0
    delayed_until: float | None = None
    waiting_since: float | None = None
    holding_since: float | None = None

    @property
    def current_target(self) -> str | None:
        if self.route_index < len(self.route):
            return self.route[self.route_index]
        return None

    @property
    def waiting_gate(self) -> str | None:
        return self.current_target if self.mode is AgentMode.WAITING_FOR_GATE else None
