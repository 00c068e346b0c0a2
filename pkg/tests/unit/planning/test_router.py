"""Tests for shortest-path routing over the global graph."""

import pytest

from terminalsim.domain.exceptions import UnreachableDestinationError
from terminalsim.meso import LinkSpec
from terminalsim.multiscale import GlobalGraph
from terminalsim.planning import Router, shortest_path

FREE_ROUTE = ("O", "M", "D")
DIRECT_ROUTE = ("O", "D")


@pytest.fixture
def graph(two_route_links: list[LinkSpec]) -> GlobalGraph:
    return GlobalGraph([], two_route_links)


# Router


def test_free_flow_route(graph: GlobalGraph):
    router = Router(graph)

    assert router.route("O", "D") == FREE_ROUTE
    assert router.cost(FREE_ROUTE) == pytest.approx(100.0)
    assert router.cost(DIRECT_ROUTE) == pytest.approx(150.0)


def test_congested_edge_diverts(graph: GlobalGraph):
    assert Router(graph, {"A1": 70.0}).route("O", "D") == DIRECT_ROUTE


def test_tie_prefers_lexicographically_smallest_sequence(graph: GlobalGraph):
    """Both routes cost 150; ("O", "D") sorts before ("O", "M", "D")."""
    assert Router(graph, {"A1": 60.0}).route("O", "D") == DIRECT_ROUTE


def test_unknown_edge_costs_ignored(graph: GlobalGraph):
    router = Router(graph, {"nope": 1.0})

    assert "nope" not in router.costs
    assert router.route("O", "D") == FREE_ROUTE


def test_distances_cached(graph: GlobalGraph):
    router = Router(graph)

    assert router.distances_to("D") is router.distances_to("D")
    assert router.distances_to("D")["O"] == pytest.approx(100.0)


def test_unreachable(graph: GlobalGraph):
    with pytest.raises(UnreachableDestinationError):
        Router(graph).route("D", "O")


def test_unknown_node(graph: GlobalGraph):
    with pytest.raises(UnreachableDestinationError):
        Router(graph).route("O", "X")


def test_same_origin_and_destination(graph: GlobalGraph):
    assert Router(graph).route("O", "O") == ("O",)


# Shortest path


def test_plan_fields(graph: GlobalGraph):
    plan = shortest_path(graph, "O", "D", agent_id="a", departure=5.0, group="od")

    assert plan.nodes == FREE_ROUTE
    assert plan.agent_id == "a"
    assert plan.departure == 5.0
    assert plan.group == "od"
    assert plan.score is None


def test_edge_costs(graph: GlobalGraph):
    assert shortest_path(graph, "O", "D", {"A2": 200.0}).nodes == DIRECT_ROUTE
