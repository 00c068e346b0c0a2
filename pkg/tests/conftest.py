"""Central test fixtures."""

import numpy as np
import pytest

from terminalsim.domain import EventSource
from terminalsim.environment import GridEnvironment, TargetKind
from terminalsim.meso import LinkSpec
from terminalsim.micro import CaConfig
from terminalsim.scenario import (
    DemandGroup,
    DemandSpec,
    Scenario,
    assemble,
    generate_demand,
)
from tests.fixtures import make_environment


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def ca_config() -> CaConfig:
    """CA parameters with defaults and a fixed seed."""
    return CaConfig(rng_seed=7)


@pytest.fixture
def source() -> EventSource:
    """Event source stamping payloads of one producer."""
    return EventSource("test")


@pytest.fixture
def corridor() -> GridEnvironment:
    """Straight corridor, 1 cell wide, with targets at both ends."""
    return make_environment(
        ["A........B"],
        "corridor",
        nodes={"A": "WEST", "B": "EAST"},
    )


@pytest.fixture
def open_room() -> GridEnvironment:
    """Open 5x5 room with a single final target in the top-left corner."""
    return make_environment(
        ["A....", ".....", ".....", ".....", "....."],
        kinds={"A": TargetKind.FINAL},
    )


@pytest.fixture
def two_route_links() -> list[LinkSpec]:
    """Two routes between O and D: a capacity-limited detour and a long direct link."""
    return [
        LinkSpec(
            id="A1",
            from_node="O",
            to_node="M",
            length_m=10.0,
            area_m2=160.0,
            free_speed=1.0,
            flow_capacity=0.5,
        ),
        LinkSpec(
            id="A2",
            from_node="M",
            to_node="D",
            length_m=90.0,
            area_m2=1000.0,
            free_speed=1.0,
            flow_capacity=1000.0,
        ),
        LinkSpec(
            id="B",
            from_node="O",
            to_node="D",
            length_m=150.0,
            area_m2=1000.0,
            free_speed=1.0,
            flow_capacity=1000.0,
        ),
    ]


@pytest.fixture
def two_route_scenario(two_route_links: list[LinkSpec]) -> Scenario:
    """100 agents from O to D at t=0 on the two-route network."""
    demand = generate_demand(
        DemandSpec(groups=(DemandGroup(tag="od", origin="O", destination="D", count=100),))
    )
    return assemble([], two_route_links, [], demand, 600.0)
