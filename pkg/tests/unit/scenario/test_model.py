"""Tests for scenario assembly and scenario directories."""

import pytest

from terminalsim.domain.exceptions import ScenarioError
from terminalsim.environment import GridEnvironment
from terminalsim.meso import LinkSpec
from terminalsim.micro import GateSchedule
from terminalsim.scenario import DemandEntry, assemble, load_scenario, write_scenario
from tests.fixtures import make_environment


@pytest.fixture
def exit_link() -> LinkSpec:
    return LinkSpec(
        id="L",
        from_node="EAST",
        to_node="FAR",
        length_m=10.0,
        area_m2=40.0,
        free_speed=1.0,
        flow_capacity=1.0,
    )


def entry(
    agent_id: str = "a", origin: str = "WEST", destination: str = "FAR", departure: float = 0.0
) -> DemandEntry:
    return DemandEntry(
        agent_id=agent_id, origin=origin, destination=destination, departure=departure
    )


# Assemble


def test_valid(corridor: GridEnvironment, exit_link: LinkSpec):
    scenario = assemble([corridor], [exit_link], [], [entry("a"), entry("b")], 120.0, seed=3)

    assert scenario.environment("corridor") is corridor
    assert scenario.links == (exit_link,)
    assert [e.agent_id for e in scenario.demand] == ["a", "b"]
    assert scenario.seed == 3
    assert scenario.graph.has_path("WEST", "FAR")


def test_unknown_environment(corridor: GridEnvironment, exit_link: LinkSpec):
    scenario = assemble([corridor], [exit_link], [], [], 120.0)

    with pytest.raises(ScenarioError, match="unknown environment 'hall'"):
        scenario.environment("hall")


def test_duplicate_link(corridor: GridEnvironment, exit_link: LinkSpec):
    twin = exit_link.model_copy(update={"from_node": "FAR", "to_node": "WEST"})

    with pytest.raises(ScenarioError, match="duplicate link id 'L'"):
        assemble([corridor], [exit_link, twin], [], [], 120.0)


def test_duplicate_agent(corridor: GridEnvironment, exit_link: LinkSpec):
    with pytest.raises(ScenarioError, match="duplicate agent id 'a'"):
        assemble([corridor], [exit_link], [], [entry("a"), entry("a")], 120.0)


def test_unknown_schedule():
    room = make_environment(["A..G"], nodes={"A": "N"}, schedules={"G": "gate_9"})

    with pytest.raises(ScenarioError, match="unknown schedule 'gate_9'"):
        assemble([room], [], [GateSchedule(id="gate_1", windows=((0.0, 1.0),))], [], 60.0)


def test_unknown_node(corridor: GridEnvironment, exit_link: LinkSpec):
    with pytest.raises(ScenarioError, match="unknown node 'MOON'"):
        assemble([corridor], [exit_link], [], [entry(destination="MOON")], 120.0)


@pytest.mark.parametrize("departure", [120.0, 500.0])
def test_departure_outside_run(
    corridor: GridEnvironment, exit_link: LinkSpec, departure: float
):
    with pytest.raises(ScenarioError, match="outside"):
        assemble([corridor], [exit_link], [], [entry(departure=departure)], 120.0)


def test_no_path(corridor: GridEnvironment, exit_link: LinkSpec):
    with pytest.raises(ScenarioError, match="no path from 'FAR' to 'WEST'"):
        assemble([corridor], [exit_link], [], [entry(origin="FAR", destination="WEST")], 120.0)


def test_sim_end_positive():
    with pytest.raises(ScenarioError, match="sim_end"):
        assemble([], [], [], [], 0.0)


# Scenario directory


def test_round_trip(corridor: GridEnvironment, exit_link: LinkSpec, tmp_path):
    schedule = GateSchedule(id="gate_1", windows=((10.0, 20.0), (40.0, 50.0)))
    scenario = assemble(
        [corridor],
        [exit_link],
        [schedule],
        [entry("a"), entry("b", departure=2.5)],
        120.0,
        seed=9,
        mode="so",
        iterations=4,
    )

    loaded = load_scenario(write_scenario(scenario, tmp_path))

    assert [env.id for env in loaded.environments] == ["corridor"]
    assert loaded.environments[0].rows == corridor.rows
    assert loaded.links == scenario.links
    assert loaded.schedules == scenario.schedules
    assert loaded.demand == scenario.demand
    assert (loaded.sim_end, loaded.seed, loaded.mode, loaded.iterations) == (
        120.0,
        9,
        "so",
        4,
    )


def test_missing_document(corridor: GridEnvironment, exit_link: LinkSpec, tmp_path):
    scenario = assemble([corridor], [exit_link], [], [entry()], 120.0)
    manifest = write_scenario(scenario, tmp_path)
    (tmp_path / "demand.csv").unlink()

    with pytest.raises(ScenarioError, match="missing scenario document"):
        load_scenario(manifest)
