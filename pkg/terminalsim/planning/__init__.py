from .relaxation import (
    HISTORY_COLUMNS,
    IterationStats,
    RelaxationConfig,
    RelaxationResult,
    experienced_edge_costs,
    initial_plans,
    relative_gap,
    relax,
    replan,
    score_run,
    write_history,
)
from .router import Router, shortest_path
from .scoring import PlanScore, RelaxationMode, score_plan

__all__ = [
    "HISTORY_COLUMNS",
    "IterationStats",
    "PlanScore",
    "RelaxationConfig",
    "RelaxationMode",
    "RelaxationResult",
    "Router",
    "experienced_edge_costs",
    "initial_plans",
    "relative_gap",
    "relax",
    "replan",
    "score_plan",
    "score_run",
    "shortest_path",
    "write_history",
]
