"""Coupled run of the synthetic two-terminal scenario with a small population."""

import pytest

from terminalsim.metrics import landing_cycle_report, travel_time_stats
from terminalsim.micro import CaConfig
from terminalsim.multiscale import (
    AgentStatus,
    MultiscaleSimulation,
    SimulationResult,
    write_ndjson,
)
from terminalsim.planning import initial_plans
from terminalsim.scenario import (
    DemandGroup,
    DemandSpec,
    Scenario,
    load_scenario,
    synthetic_scenario,
    write_scenario,
)

BOARDERS = 20
DISEMBARKERS = 10


@pytest.fixture(scope="module")
def scenario() -> Scenario:
    demand = DemandSpec(
        groups=(
            DemandGroup(
                tag="WH:board",
                origin="WH_STREET",
                destination="SG_EXIT",
                count=BOARDERS,
                end=100.0,
            ),
            DemandGroup(
                tag="WH:disembark", origin="WH_PIER", destination="WH_EXIT", count=DISEMBARKERS
            ),
        ),
        seed=2,
    )
    return synthetic_scenario(demand, seed=2)


def simulate(scenario: Scenario) -> SimulationResult:
    simulation = MultiscaleSimulation(
        scenario.graph,
        scenario.environments,
        scenario.links,
        scenario.schedules_by_id,
        scenario.sim_end,
        config=CaConfig(rng_seed=scenario.seed),
    )
    return simulation.run(initial_plans(scenario))


@pytest.fixture(scope="module")
def result(scenario: Scenario) -> SimulationResult:
    return simulate(scenario)


@pytest.mark.integration
def test_everyone_arrives(result: SimulationResult):
    assert result.incomplete == []
    assert len(result.statuses) == BOARDERS + DISEMBARKERS
    assert set(result.statuses.values()) == {AgentStatus.ARRIVED}


@pytest.mark.integration
def test_boarders_cross_on_the_ferry(scenario: Scenario, result: SimulationResult):
    ferry = [record for record in result.records if record.edge_id == "WH_SG_FERRY"]

    assert len(ferry) == BOARDERS
    assert all(record.travel_time >= 1500.0 - 1e-6 for record in ferry)
    plan = initial_plans(scenario)[0]
    assert plan.origin == "WH_STREET"
    assert "SG_PIER" in plan.nodes


@pytest.mark.integration
def test_travel_time_rows(result: SimulationResult):
    rows = {row.group: row for row in travel_time_stats(result.events)}

    assert rows["WH:board"].n == BOARDERS
    assert rows["WH:disembark"].n == DISEMBARKERS
    assert rows["WH:board"].min > rows["WH:disembark"].max


@pytest.mark.integration
def test_landing_cycle(result: SimulationResult):
    (summary,) = landing_cycle_report(result.events)

    assert summary.cycle == "WH"
    assert (summary.disembark_agents, summary.board_agents) == (DISEMBARKERS, BOARDERS)
    assert summary.disembark_s > 0.0
    assert summary.board_s > 0.0


@pytest.mark.integration
def test_deterministic(scenario: Scenario, result: SimulationResult, tmp_path):
    first = write_ndjson(result.events, tmp_path / "first.ndjson")
    second = write_ndjson(simulate(scenario).events, tmp_path / "second.ndjson")

    assert first.read_bytes() == second.read_bytes()


@pytest.mark.integration
def test_written_scenario_runs(scenario: Scenario, tmp_path):
    loaded = load_scenario(write_scenario(scenario, tmp_path / "scenario"))

    assert loaded.demand == scenario.demand
    assert loaded.schedules == scenario.schedules
    assert loaded.graph.nodes == scenario.graph.nodes
    assert set(simulate(loaded).statuses.values()) == {AgentStatus.ARRIVED}
