"""Shortest paths over the global graph with deterministic tie-breaking."""

import logging
from collections.abc import Mapping
from typing import Any

import networkx as nx

from ..domain import Plan
from ..domain.exceptions import UnreachableDestinationError
from ..multiscale import GlobalGraph

LOGGER = logging.getLogger(__name__)

_RELATIVE_TIE = 1e-9


class Router:
    """Answers shortest-path queries under fixed edge costs.

    Distances to a destination are computed once (Dijkstra on the reversed
    graph) and reused for every origin. Among equally cheap paths the
    lexicographically smallest node sequence is returned.

    Args:
        graph: The global graph.
        edge_costs: Cost per edge id; edges without an entry use their free
            travel time.
    """

    def __init__(self, graph: GlobalGraph, edge_costs: Mapping[str, float] | None = None):
        self.graph = graph
        self.costs = graph.free_costs()
        if edge_costs is not None:
            self.costs.update(
                {edge_id: cost for edge_id, cost in edge_costs.items() if edge_id in self.costs}
            )
        self._distances: dict[str, dict[str, float]] = {}

    def _weight(self, u: str, v: str, data: dict[str, Any]) -> float:
        return self.costs[data["id"]]

    def distances_to(self, destination: str) -> dict[str, float]:
        if destination not in self._distances:
            reverse = self.graph.graph.reverse(copy=False)
            self._distances[destination] = dict(
                nx.single_source_dijkstra_path_length(reverse, destination, weight=self._weight)
            )
        return self._distances[destination]

    def route(self, origin: str, destination: str) -> tuple[str, ...]:
        """Cheapest node sequence from ``origin`` to ``destination``.

        Raises:
            UnreachableDestinationError: If either node is missing or no path exists.
        """
        if origin not in self.graph or destination not in self.graph:
            raise UnreachableDestinationError(origin, destination)
        distances = self.distances_to(destination)
        if origin not in distances:
            raise UnreachableDestinationError(origin, destination)
        successors = self.graph.graph.succ
        path = [origin]
        node = origin
        while node != destination:
            remaining = distances[node]
            tolerance = _RELATIVE_TIE * max(1.0, remaining)
            node = min(
                v
                for v, data in successors[node].items()
                if v in distances
                and v not in path
                and abs(self.costs[data["id"]] + distances[v] - remaining) <= tolerance
            )
            path.append(node)
        return tuple(path)

    def cost(self, nodes: tuple[str, ...]) -> float:
        return sum(self.costs[self.graph.edge(u, v).id] for u, v in zip(nodes, nodes[1:]))


def shortest_path(
    graph: GlobalGraph,
    origin: str,
    destination: str,
    edge_costs: Mapping[str, float] | None = None,
    *,
    agent_id: str = "",
    departure: float = 0.0,
    group: str = "",
) -> Plan:
    """Plan for one agent along the cheapest path (free travel times by default)."""
    nodes = Router(graph, edge_costs).route(origin, destination)
    return Plan(agent_id=agent_id, nodes=nodes, departure=departure, group=group)
