"""Tests for the per-environment routing graph fragment."""

import pytest

from terminalsim.environment import (
    FloorField,
    GridEnvironment,
    NetworkEdge,
    compute_floor_fields,
    extract_network,
    micro_edge_id,
)
from tests.fixtures import make_environment


# Extract network


def test_corridor_edge(corridor: GridEnvironment):
    """A straight corridor yields one edge of its walking length."""
    edges = extract_network(corridor, compute_floor_fields(corridor))

    assert len(edges) == 1
    edge = edges[0]
    assert (edge.from_target, edge.to_target) == ("A", "B")
    assert edge.length == pytest.approx(3.6)
    assert edge.free_travel_time == pytest.approx(3.6 / 1.34)


def test_asymmetric_lengths_are_averaged(corridor: GridEnvironment):
    """The edge length is the mean of both directions' field values."""
    fields = compute_floor_fields(corridor)
    fields["B"] = FloorField("B", fields["B"].values, {"A": 4.8})
    fields["A"] = FloorField("A", fields["A"].values, {"B": 4.0})

    (edge,) = extract_network(corridor, fields)

    assert edge.length == pytest.approx(4.4)
    assert edge.free_travel_time == pytest.approx(3.2836, abs=1e-4)


def test_separated_rooms():
    """Targets are only connected within the room they share."""
    env = make_environment(
        [
            "A...#....",
            "....#....",
            "..B.#...C",
        ]
    )
    edges = extract_network(env, compute_floor_fields(env))

    assert [(e.from_target, e.to_target) for e in edges] == [("A", "B")]


def test_target_between_targets_blocks_passage():
    """A target in the only passage splits the path into two edges."""
    env = make_environment(["A...B...C"])
    edges = extract_network(env, compute_floor_fields(env))

    assert [(e.from_target, e.to_target) for e in edges] == [("A", "B"), ("B", "C")]


# Network edge


def test_reversed():
    edge = NetworkEdge("A", "B", 2.0, 1.0)

    assert edge.reversed() == NetworkEdge("B", "A", 2.0, 1.0)


def test_rejects_zero_length():
    with pytest.raises(ValueError):
        NetworkEdge("A", "B", 0.0, 1.0)


def test_edge_id():
    assert micro_edge_id("WH", "E", "G") == "WH:E>G"
