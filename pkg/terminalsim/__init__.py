"""terminalsim - multiscale pedestrian and ferry-terminal simulation.

This module provides the public API for building scenarios, running the
coupled cellular automaton and queue model, and relaxing route plans.
"""

from .domain import Event, Plan, SimulationEvent
from .environment import GridEnvironment, Target, TargetKind, compute_floor_fields
from .meso import LinkSpec, MesoLink
from .micro import CaConfig, MicroSimulation
from .multiscale import GlobalGraph, MultiscaleSimulation, SimulationResult
from .planning import RelaxationConfig, RelaxationMode, Router, relax
from .processing import EventReducer
from .routing import handles_event
from .scenario import Scenario, load_scenario, synthetic_scenario

__version__ = "0.1.0"

__all__ = [
    # Domain primitives
    "Event",
    "Plan",
    "SimulationEvent",
    # Environments
    "GridEnvironment",
    "Target",
    "TargetKind",
    "compute_floor_fields",
    # Models
    "CaConfig",
    "LinkSpec",
    "MesoLink",
    "MicroSimulation",
    "GlobalGraph",
    "MultiscaleSimulation",
    "SimulationResult",
    # Planning
    "RelaxationConfig",
    "RelaxationMode",
    "Router",
    "relax",
    # Scenarios
    "Scenario",
    "load_scenario",
    "synthetic_scenario",
    # Event processing
    "EventReducer",
    "handles_event",
]
