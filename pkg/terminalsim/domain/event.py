from typing import Any, ClassVar, Generic, Literal, TypeVar

from pydantic import BaseModel, Field

T = TypeVar("T", bound=BaseModel)

Cell = tuple[int, int]


class Event(BaseModel, Generic[T]):
    """Timestamped record of something that happened during a simulation run.

    The envelope combines ordering metadata with a typed payload. Events are
    produced per source (the departure process, each micro environment, the
    meso network and the node queues) and merged into one stream ordered by
    ``(time, source, sequence)``.

    Attributes:
        time: Simulation time in seconds, rounded to 6 decimals.
        source: Identifier of the producer (environment id, ``meso``, ...).
        sequence: Position in the producer's stream (1-indexed).
        data: Typed event payload (e.g. EdgeLeft, TargetReached).

    Examples:
        >>> event = Event(
        ...     time=12.5,
        ...     source="WH",
        ...     sequence=7,
        ...     data=TargetReached(agent_id="a1", env_id="WH", target_id="G"),
        ... )
    """

    time: float = Field(description="Simulation time in seconds")
    source: str = Field(description="Producer of the event")
    sequence: int = Field(description="Position in the producer's stream (1-indexed)")
    data: T = Field(description="Typed event data conforming to schema T")


class SimulationEvent(BaseModel):
    """Base payload for every event kind written to the event log.

    Subclasses set ``kind`` (the log record kind) and ``ref_field`` (the
    payload field that becomes the record's ``edge_or_node`` column).
    """

    kind: ClassVar[str]
    ref_field: ClassVar[str]
    registry: ClassVar[dict[str, type["SimulationEvent"]]] = {}

    agent_id: str

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        kind = cls.__dict__.get("kind")
        if kind is not None:
            SimulationEvent.registry[kind] = cls

    @property
    def ref(self) -> str:
        return str(getattr(self, self.ref_field))

    def detail(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"agent_id", self.ref_field})


class AgentDeparted(SimulationEvent):
    kind: ClassVar[str] = "depart"
    ref_field: ClassVar[str] = "node"

    node: str
    group: str


class AgentPlaced(SimulationEvent):
    """Agent put on a free cell of a target when entering an environment."""

    kind: ClassVar[str] = "place"
    ref_field: ClassVar[str] = "node"

    node: str
    env_id: str
    target_id: str
    cell: Cell


class EdgeEntered(SimulationEvent):
    kind: ClassVar[str] = "enter"
    ref_field: ClassVar[str] = "edge_id"

    edge_id: str
    scale: Literal["micro", "meso"]


class EdgeLeft(SimulationEvent):
    """Agent completed an edge of the global graph.

    ``gate_wait`` is the time spent waiting for closed gates on the edge; the
    observed travel time used for congestion detection excludes it.
    """

    kind: ClassVar[str] = "leave"
    ref_field: ClassVar[str] = "edge_id"

    edge_id: str
    entered_at: float
    gate_wait: float = 0.0

    def observed_travel_time(self, exit_time: float) -> float:
        return exit_time - self.entered_at - self.gate_wait


class TargetReached(SimulationEvent):
    kind: ClassVar[str] = "target"
    ref_field: ClassVar[str] = "target_id"

    env_id: str
    target_id: str


class DelayStarted(SimulationEvent):
    kind: ClassVar[str] = "delay"
    ref_field: ClassVar[str] = "target_id"

    env_id: str
    target_id: str
    until: float


class GateWaitStarted(SimulationEvent):
    kind: ClassVar[str] = "wait"
    ref_field: ClassVar[str] = "target_id"

    env_id: str
    target_id: str


class GatePassed(SimulationEvent):
    kind: ClassVar[str] = "gate"
    ref_field: ClassVar[str] = "target_id"

    env_id: str
    target_id: str


class AgentArrived(SimulationEvent):
    kind: ClassVar[str] = "arrive"
    ref_field: ClassVar[str] = "node"

    node: str


class AgentStranded(SimulationEvent):
    """Agent can make no further progress (gate schedule exhausted)."""

    kind: ClassVar[str] = "stranded"
    ref_field: ClassVar[str] = "target_id"

    env_id: str
    target_id: str
    reason: str


class AgentAborted(SimulationEvent):
    kind: ClassVar[str] = "abort"
    ref_field: ClassVar[str] = "node"

    node: str
    reason: str


class AgentMoved(SimulationEvent):
    kind: ClassVar[str] = "move"
    ref_field: ClassVar[str] = "env_id"

    env_id: str
    from_cell: Cell
    to_cell: Cell


class EventSource:
    """Stamps payloads of one producer with time, source and sequence."""

    def __init__(self, source: str):
        self.source = source
        self.sequence = 0

    def emit(self, t: float, payload: SimulationEvent) -> Event[SimulationEvent]:
        self.sequence += 1
        return Event[SimulationEvent](
            time=round(t, 6), source=self.source, sequence=self.sequence, data=payload
        )
