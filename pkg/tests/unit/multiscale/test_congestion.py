"""Tests for congestion states and external costs."""

import logging

import pytest

from terminalsim.domain import EdgeEntered, EdgeLeft, EventSource
from terminalsim.multiscale import CongestionTracker, external_cost

FREE = 10.0


def leave(source: EventSource, agent_id: str, exit_time: float, travel: float):
    """Exit event of edge ``E`` after ``travel`` seconds on it."""
    return source.emit(
        exit_time, EdgeLeft(agent_id=agent_id, edge_id="E", entered_at=exit_time - travel)
    )


@pytest.fixture
def tracker() -> CongestionTracker:
    return CongestionTracker({"E": FREE}, tolerance=0.0)


# External cost


def test_time_until_relief():
    assert external_cost(130.0, 160.0) == 30.0


def test_never_negative():
    assert external_cost(170.0, 160.0) == 0.0


# Congestion tracker


def test_episode(tracker: CongestionTracker, source: EventSource):
    """Every slow exit pays the time until the next free-flow exit."""
    events = [
        leave(source, "a", 90.0, FREE),
        leave(source, "b", 100.0, 40.0),
        leave(source, "c", 130.0, 50.0),
        leave(source, "d", 145.0, 30.0),
        leave(source, "e", 160.0, FREE),
    ]

    tracker.replay(events).finalize(600.0)

    costs = {r.agent_id: r.external_cost for r in tracker.records}
    assert costs == {"a": 0.0, "b": 60.0, "c": 30.0, "d": 15.0, "e": 0.0}
    assert [(t.time, t.congested) for t in tracker.transitions] == [
        (100.0, True),
        (160.0, False),
    ]
    assert not tracker.is_congested("E")


def test_tolerance_absorbs_one_timestep(source: EventSource):
    tracker = CongestionTracker({"E": FREE}, tolerance=0.3)

    tracker.replay([leave(source, "a", 50.0, FREE + 0.3)])

    assert not tracker.is_congested("E")


def test_gate_wait_is_not_congestion(tracker: CongestionTracker, source: EventSource):
    """Time spent at closed gates does not count as slow travel."""
    event = source.emit(
        120.0, EdgeLeft(agent_id="a", edge_id="E", entered_at=20.0, gate_wait=90.0)
    )

    tracker.handle(event)

    assert not tracker.is_congested("E")
    assert tracker.records[0].travel_time == 100.0


def test_unrelieved_at_end_of_run(
    tracker: CongestionTracker, source: EventSource, caplog: pytest.LogCaptureFixture
):
    tracker.replay([leave(source, "a", 130.0, 60.0)])

    with caplog.at_level(logging.WARNING):
        tracker.finalize(200.0)

    (record,) = tracker.records
    assert record.external_cost == 70.0
    assert record.unrelieved
    assert "still congested" in caplog.text


def test_unknown_edges_ignored(tracker: CongestionTracker, source: EventSource):
    event = source.emit(5.0, EdgeLeft(agent_id="a", edge_id="other", entered_at=0.0))

    tracker.handle(event)

    assert tracker.transitions == []
    assert len(tracker.records) == 1


def test_tracks_open_edges(tracker: CongestionTracker, source: EventSource):
    tracker.handle(source.emit(1.0, EdgeEntered(agent_id="a", edge_id="E", scale="meso")))

    assert tracker.open_edges == {("a", "E"): 1.0}

    tracker.handle(leave(source, "a", 11.0, FREE))

    assert tracker.open_edges == {}


def test_records_by_agent(tracker: CongestionTracker, source: EventSource):
    tracker.replay([leave(source, "a", 10.0, FREE), leave(source, "a", 30.0, FREE)])

    assert [r.exit for r in tracker.records_by_agent()["a"]] == [10.0, 30.0]
