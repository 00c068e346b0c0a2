from .config import CaConfig
from .engine import (
    GateDecision,
    MicroSimulation,
    apply_delaying_target,
    apply_scheduled_target,
    choose_move,
)
from .schedule import GateSchedule, load_schedules, write_schedules
from .state import AgentMode, MicroAgentState

__all__ = [
    "AgentMode",
    "CaConfig",
    "GateDecision",
    "GateSchedule",
    "MicroAgentState",
    "MicroSimulation",
    "apply_delaying_target",
    "apply_scheduled_target",
    "choose_move",
    "load_schedules",
    "write_schedules",
]
