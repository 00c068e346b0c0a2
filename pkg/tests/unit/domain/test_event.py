"""Tests for event envelopes, payload kinds and event sources."""

import pytest
from pydantic import ValidationError

from terminalsim.domain import (
    AgentArrived,
    EdgeLeft,
    Event,
    EventSource,
    Plan,
    SimulationEvent,
    TargetReached,
)


# Event source


def test_sequence_counts_from_one(source: EventSource):
    """Each emitted event gets the next sequence number of its producer."""
    first = source.emit(1.0, AgentArrived(agent_id="a", node="D"))
    second = source.emit(1.0, AgentArrived(agent_id="b", node="D"))

    assert (first.sequence, second.sequence) == (1, 2)
    assert first.source == second.source == "test"


def test_time_rounded_to_microseconds(source: EventSource):
    """Event times are rounded to 6 decimals."""
    event = source.emit(0.1 + 0.2, AgentArrived(agent_id="a", node="D"))

    assert event.time == 0.3


def test_payload_subclass_preserved(source: EventSource):
    """The envelope keeps the concrete payload type."""
    event = source.emit(2.0, TargetReached(agent_id="a", env_id="WH", target_id="G"))

    assert isinstance(event.data, TargetReached)
    assert event.data.target_id == "G"


# Simulation event


def test_registry_maps_kinds():
    """Every payload kind is registered under its log name."""
    registry = SimulationEvent.registry

    assert registry["leave"] is EdgeLeft
    assert registry["arrive"] is AgentArrived
    assert {"depart", "place", "enter", "target", "gate", "stranded"} <= set(registry)


def test_ref_and_detail():
    """The ref field is split off the payload; the rest is detail."""
    payload = EdgeLeft(agent_id="a", edge_id="L1", entered_at=3.0, gate_wait=1.5)

    assert payload.ref == "L1"
    assert payload.detail() == {"entered_at": 3.0, "gate_wait": 1.5}


def test_observed_travel_time_excludes_gate_wait():
    """Gate waiting is not part of the observed travel time."""
    payload = EdgeLeft(agent_id="a", edge_id="L1", entered_at=10.0, gate_wait=20.0)

    assert payload.observed_travel_time(50.0) == pytest.approx(20.0)


def test_envelope_requires_metadata():
    """Envelopes without time are rejected."""
    with pytest.raises(ValidationError):
        Event[SimulationEvent](
            source="x", sequence=1, data=AgentArrived(agent_id="a", node="D")
        )


# Plan


def test_endpoints_and_edges():
    """A plan exposes origin, destination and consecutive node pairs."""
    plan = Plan(agent_id="a", nodes=("O", "M", "D"), departure=0.0)

    assert plan.origin == "O"
    assert plan.destination == "D"
    assert plan.edges() == [("O", "M"), ("M", "D")]


def test_rejects_empty_route():
    """At least one node is required."""
    with pytest.raises(ValidationError):
        Plan(agent_id="a", nodes=(), departure=0.0)


def test_rejects_negative_departure():
    with pytest.raises(ValidationError):
        Plan(agent_id="a", nodes=("O",), departure=-1.0)


def test_is_frozen():
    """Plans are replaced, never mutated."""
    plan = Plan(agent_id="a", nodes=("O", "D"), departure=0.0)

    with pytest.raises(ValidationError):
        plan.departure = 5.0  # type: ignore[misc]
    assert plan.model_copy(update={"score": 12.0}).score == 12.0
