"""Tests for annotation based dispatch in event reducers."""

import pytest

from terminalsim.domain import (
    AgentArrived,
    AgentDeparted,
    EdgeLeft,
    Event,
    EventSource,
    SimulationEvent,
)
from terminalsim.processing import EventReducer
from terminalsim.routing import handles_event


# Test reducers


class PayloadReducer(EventReducer):
    """Receives payloads only."""

    def __init__(self) -> None:
        self.arrived: list[str] = []

    @handles_event
    def on_arrived(self, event: AgentArrived) -> None:
        self.arrived.append(event.agent_id)


class WrapperReducer(EventReducer):
    """Receives envelopes for edge exits."""

    def __init__(self) -> None:
        self.exits: list[tuple[float, str]] = []

    @handles_event
    def on_left(self, event: Event[EdgeLeft]) -> None:
        self.exits.append((event.time, event.data.edge_id))


class CatchAllReducer(EventReducer):
    """A handler on the base payload class sees every kind."""

    def __init__(self) -> None:
        self.kinds: list[str] = []

    @handles_event
    def on_any(self, event: SimulationEvent) -> None:
        self.kinds.append(event.kind)


class OverridingReducer(PayloadReducer):
    """Subclass handler replaces the inherited one."""

    @handles_event
    def on_arrived(self, event: AgentArrived) -> None:
        self.arrived.append(event.agent_id.upper())


# Fixtures


@pytest.fixture
def events(source: EventSource) -> list[Event[SimulationEvent]]:
    return [
        source.emit(0.0, AgentDeparted(agent_id="a", node="O", group="g")),
        source.emit(4.0, EdgeLeft(agent_id="a", edge_id="L", entered_at=0.0)),
        source.emit(4.0, AgentArrived(agent_id="a", node="D")),
    ]


# Dispatch


def test_payload_annotation_receives_payload(events):
    """Handlers annotated with a payload type get the payload."""
    reducer = PayloadReducer().replay(events)

    assert reducer.arrived == ["a"]


def test_wrapper_annotation_receives_envelope(events):
    """Handlers annotated Event[T] get time and source with the payload."""
    reducer = WrapperReducer().replay(events)

    assert reducer.exits == [(4.0, "L")]


def test_unhandled_types_ignored(events):
    """Events without a handler are skipped silently."""
    reducer = PayloadReducer()

    assert reducer.handle(events[0]) is None
    assert reducer.arrived == []


def test_base_class_handler_receives_subclasses(events):
    reducer = CatchAllReducer().replay(events)

    assert reducer.kinds == ["depart", "leave", "arrive"]


def test_subclass_overrides_handler(events):
    """A handler redefined in a subclass wins over the inherited one."""
    reducer = OverridingReducer().replay(events)

    assert reducer.arrived == ["A"]


def test_replay_is_deterministic(events):
    """Replaying the same stream into fresh reducers gives the same state."""
    first = WrapperReducer().replay(events)
    second = WrapperReducer().replay(events)

    assert first.exits == second.exits


# Handler declaration


def test_missing_annotation_rejected():
    with pytest.raises(ValueError, match="type annotation"):

        class Broken(EventReducer):
            @handles_event
            def on_event(event) -> None:  # type: ignore[no-untyped-def]
                pass


def test_missing_argument_rejected():
    with pytest.raises(ValueError, match="must accept an event"):

        class Broken(EventReducer):
            @handles_event
            def on_event() -> None:
                pass
