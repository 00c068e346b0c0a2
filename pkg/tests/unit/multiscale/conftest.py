"""Fixtures for the coupled model: a corridor feeding a queue link."""

import pytest

from terminalsim.environment import GridEnvironment
from terminalsim.meso import LinkSpec
from terminalsim.multiscale import GlobalGraph


@pytest.fixture
def exit_link() -> LinkSpec:
    """Link from the corridor's east end to a far node, 10 s at free speed."""
    return LinkSpec(
        id="L",
        from_node="EAST",
        to_node="FAR",
        length_m=10.0,
        area_m2=40.0,
        free_speed=1.0,
        flow_capacity=1.0,
    )


@pytest.fixture
def graph(corridor: GridEnvironment, exit_link: LinkSpec) -> GlobalGraph:
    return GlobalGraph([corridor], [exit_link])
