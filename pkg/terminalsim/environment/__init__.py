from .delays import ConstantDelay, DelayDistribution, ExponentialDelay, parse_delay_spec
from .document import dump_environment, load_environment, parse_environment, write_environment
from .floor_field import (
    UNREACHABLE,
    FloorField,
    compute_floor_field,
    compute_floor_fields,
    step_allowed,
)
from .grid import (
    CELL_SIDE,
    DEFAULT_FREE_SPEED,
    MAX_DENSITY,
    CellKind,
    GridEnvironment,
    Target,
    TargetKind,
)
from .network import NetworkEdge, extract_network, micro_edge_id

__all__ = [
    # Geometry
    "CELL_SIDE",
    "DEFAULT_FREE_SPEED",
    "MAX_DENSITY",
    "CellKind",
    "GridEnvironment",
    "Target",
    "TargetKind",
    # Documents
    "dump_environment",
    "load_environment",
    "parse_environment",
    "write_environment",
    # Delays
    "ConstantDelay",
    "DelayDistribution",
    "ExponentialDelay",
    "parse_delay_spec",
    # Fields and network
    "UNREACHABLE",
    "FloorField",
    "NetworkEdge",
    "compute_floor_field",
    "compute_floor_fields",
    "extract_network",
    "micro_edge_id",
    "step_allowed",
]
