from .congestion import CongestionTracker, CongestionTransition, TravelRecord, external_cost
from .graph import GlobalEdge, GlobalGraph, Leg
from .log import EventLog, LogRecord, read_ndjson, write_ndjson
from .simulation import (
    AgentStatus,
    MultiscaleSimulation,
    OccupancyObserver,
    SimulationResult,
)

__all__ = [
    "AgentStatus",
    "CongestionTracker",
    "CongestionTransition",
    "EventLog",
    "GlobalEdge",
    "GlobalGraph",
    "Leg",
    "LogRecord",
    "MultiscaleSimulation",
    "OccupancyObserver",
    "SimulationResult",
    "TravelRecord",
    "external_cost",
    "read_ndjson",
    "write_ndjson",
]
