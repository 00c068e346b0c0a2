"""The global graph joining environment fragments and meso links.

Nodes are global node ids. An environment contributes one node per target
(``env.node_of``) and a pair of directed micro edges per extracted network
edge; every meso link contributes one directed edge.
"""

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Literal

import networkx as nx

from ..domain import Plan
from ..domain.exceptions import PlanCorruptError, ScenarioError
from ..environment import (
    FloorField,
    GridEnvironment,
    compute_floor_fields,
    extract_network,
    micro_edge_id,
)
from ..meso import LinkSpec

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GlobalEdge:
    """Directed edge of the global graph.

    Micro edges carry ``env_id``/``from_target``/``to_target``; meso edges
    carry ``link_id``.
    """

    id: str
    from_node: str
    to_node: str
    kind: Literal["micro", "meso"]
    free_travel_time: float
    env_id: str | None = None
    from_target: str | None = None
    to_target: str | None = None
    link_id: str | None = None


@dataclass(frozen=True, slots=True)
class Leg:
    """Consecutive part of a plan handled by one model.

    A micro leg walks ``route`` inside ``env_id`` starting from
    ``start_target``; a meso leg is a single link.
    """

    kind: Literal["micro", "meso"]
    edges: tuple[GlobalEdge, ...]
    env_id: str | None = None
    start_target: str | None = None
    route: tuple[str, ...] = ()
    link_id: str | None = None

    @property
    def start_node(self) -> str:
        return self.edges[0].from_node

    @property
    def end_node(self) -> str:
        return self.edges[-1].to_node


class GlobalGraph:
    """Directed graph over global node ids backed by :class:`networkx.DiGraph`.

    Raises:
        ScenarioError: If a node is bound by two environments, or two edges
            join the same pair of nodes or share an id.
    """

    def __init__(
        self,
        environments: Iterable[GridEnvironment],
        links: Iterable[LinkSpec],
        fields: Mapping[str, Mapping[str, FloorField]] | None = None,
    ):
        self.graph = nx.DiGraph()
        self.edges_by_id: dict[str, GlobalEdge] = {}
        self._node_env: dict[str, str] = {}
        self._node_target: dict[str, str] = {}

        for env in sorted(environments, key=lambda e: e.id):
            env_fields = fields.get(env.id) if fields is not None else None
            self._add_environment(env, env_fields)
        for link in sorted(links, key=lambda spec: spec.id):
            self._add_edge(
                GlobalEdge(
                    id=link.id,
                    from_node=link.from_node,
                    to_node=link.to_node,
                    kind="meso",
                    free_travel_time=link.t_min,
                    link_id=link.id,
                )
            )
        LOGGER.debug(
            "Assembled global graph",
            extra={"nodes": self.graph.number_of_nodes(), "edges": self.graph.number_of_edges()},
        )

    def _add_environment(
        self, env: GridEnvironment, fields: Mapping[str, FloorField] | None
    ) -> None:
        for target in env.targets:
            node = env.node_of(target.id)
            if node in self._node_env:
                raise ScenarioError(
                    f"node {node!r} is bound in both {self._node_env[node]!r} and {env.id!r}"
                )
            self._node_env[node] = env.id
            self._node_target[node] = target.id
            self.graph.add_node(node, env_id=env.id, target_id=target.id)
        routing_fields = fields if fields is not None else compute_floor_fields(env)
        for edge in extract_network(env, routing_fields):
            for directed in (edge, edge.reversed()):
                self._add_edge(
                    GlobalEdge(
                        id=micro_edge_id(env.id, directed.from_target, directed.to_target),
                        from_node=env.node_of(directed.from_target),
                        to_node=env.node_of(directed.to_target),
                        kind="micro",
                        free_travel_time=directed.free_travel_time,
                        env_id=env.id,
                        from_target=directed.from_target,
                        to_target=directed.to_target,
                    )
                )

    def _add_edge(self, edge: GlobalEdge) -> None:
        if edge.id in self.edges_by_id:
            raise ScenarioError(f"duplicate edge id {edge.id!r}")
        if self.graph.has_edge(edge.from_node, edge.to_node):
            existing = self.graph.edges[edge.from_node, edge.to_node]["edge"]
            raise ScenarioError(
                f"edges {existing.id!r} and {edge.id!r} both join "
                f"{edge.from_node!r} to {edge.to_node!r}"
            )
        self.graph.add_edge(edge.from_node, edge.to_node, edge=edge, id=edge.id)
        self.edges_by_id[edge.id] = edge

    # Queries

    def __contains__(self, node: object) -> bool:
        return node in self.graph

    @property
    def nodes(self) -> list[str]:
        return sorted(self.graph.nodes)

    def __iter__(self) -> Iterator[GlobalEdge]:
        return iter(self.edges_by_id.values())

    def edge(self, from_node: str, to_node: str) -> GlobalEdge:
        try:
            edge: GlobalEdge = self.graph.edges[from_node, to_node]["edge"]
        except KeyError:
            raise PlanCorruptError(f"no edge from {from_node!r} to {to_node!r}") from None
        return edge

    def env_of(self, node: str) -> str | None:
        return self._node_env.get(node)

    def target_of(self, node: str) -> str | None:
        return self._node_target.get(node)

    def free_costs(self) -> dict[str, float]:
        return {edge_id: edge.free_travel_time for edge_id, edge in self.edges_by_id.items()}

    def has_path(self, origin: str, destination: str) -> bool:
        if origin not in self.graph or destination not in self.graph:
            return False
        return bool(nx.has_path(self.graph, origin, destination))

    def legs(self, plan: Plan) -> list[Leg]:
        """Split a plan into micro runs (one environment each) and meso links.

        Raises:
            PlanCorruptError: If two consecutive plan nodes are not joined by an edge.
        """
        legs: list[Leg] = []
        run: list[GlobalEdge] = []

        def close_run() -> None:
            if run:
                legs.append(
                    Leg(
                        kind="micro",
                        edges=tuple(run),
                        env_id=run[0].env_id,
                        start_target=run[0].from_target,
                        route=tuple(e.to_target or "" for e in run),
                    )
                )
                run.clear()

        for from_node, to_node in plan.edges():
            edge = self.edge(from_node, to_node)
            if edge.kind == "meso":
                close_run()
                legs.append(Leg(kind="meso", edges=(edge,), link_id=edge.link_id))
            else:
                if run and run[0].env_id != edge.env_id:
                    close_run()
                run.append(edge)
        close_run()
        return legs
