from .event import (
    AgentAborted,
    AgentArrived,
    AgentDeparted,
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
from .plan import Plan

__all__ = [
    "AgentAborted",
    "AgentArrived",
    "AgentDeparted",
    "AgentMoved",
    "AgentPlaced",
    "AgentStranded",
    "Cell",
    "DelayStarted",
    "EdgeEntered",
    "EdgeLeft",
    "Event",
    "EventSource",
    "GatePassed",
    "GateWaitStarted",
    "Plan",
    "SimulationEvent",
    "TargetReached",
]
