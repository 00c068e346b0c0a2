from .demand import (
    DEMAND_COLUMNS,
    DEMAND_PRESETS,
    DemandEntry,
    DemandGroup,
    DemandSpec,
    generate_demand,
    load_demand,
    preset_demand,
    write_demand,
)
from .manifest import ScenarioManifest, dump_manifest, load_manifest, parse_manifest
from .model import Scenario, assemble, load_scenario, scenario_from_manifest, write_scenario
from .synthetic import synthetic_scenario, terminal_environment, write_synthetic_scenario

__all__ = [
    # Demand
    "DEMAND_COLUMNS",
    "DEMAND_PRESETS",
    "DemandEntry",
    "DemandGroup",
    "DemandSpec",
    "generate_demand",
    "load_demand",
    "preset_demand",
    "write_demand",
    # Manifest
    "ScenarioManifest",
    "dump_manifest",
    "load_manifest",
    "parse_manifest",
    # Assembly
    "Scenario",
    "assemble",
    "load_scenario",
    "scenario_from_manifest",
    "write_scenario",
    # Synthetic terminal
    "synthetic_scenario",
    "terminal_environment",
    "write_synthetic_scenario",
]
