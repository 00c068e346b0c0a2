"""Extraction of the routing-graph fragment of one environment."""

import math
from collections.abc import Mapping
from dataclasses import dataclass
from itertools import combinations

from .floor_field import FloorField
from .grid import GridEnvironment


@dataclass(frozen=True, slots=True)
class NetworkEdge:
    """Direct passage between two targets of the same environment.

    The length is the average of the two floor-field values measured at the
    opposite target's centre, so it is symmetric in the pair.
    """

    from_target: str
    to_target: str
    length: float
    free_speed: float

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ValueError("Edge length must be positive")
        if self.free_speed <= 0:
            raise ValueError("Free speed must be positive")

    @property
    def free_travel_time(self) -> float:
        return self.length / self.free_speed

    def reversed(self) -> "NetworkEdge":
        return NetworkEdge(self.to_target, self.from_target, self.length, self.free_speed)


def extract_network(env: GridEnvironment, fields: Mapping[str, FloorField]) -> list[NetworkEdge]:
    """One edge per unordered target pair whose fields reach each other's centre.

    ``fields`` must be the routing variant (``isolate_targets=True``) for
    every target; unreachable pairs yield no edge. Edges are returned with
    ``from_target < to_target``, sorted by that pair.
    """
    edges: list[NetworkEdge] = []
    for first, second in combinations(sorted(t.id for t in env.targets), 2):
        forward = fields[first].reach.get(second, math.inf)
        backward = fields[second].reach.get(first, math.inf)
        if math.isfinite(forward) and math.isfinite(backward):
            edges.append(NetworkEdge(first, second, (forward + backward) / 2.0, env.free_speed))
    return edges


def micro_edge_id(env_id: str, from_target: str, to_target: str) -> str:
    """Global edge id of the passage between two targets of one environment."""
    return f"{env_id}:{from_target}>{to_target}"
