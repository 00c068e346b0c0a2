"""The event log: per-source buffers, merged ordering and NDJSON files."""

import heapq
import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from ..domain import Event, SimulationEvent
from ..domain.exceptions import TerminalSimError

LOGGER = logging.getLogger(__name__)

LOG_SOURCE = "log"


class LogRecord(BaseModel):
    """One line of the NDJSON event log, keys in file order."""

    time: float
    kind: str
    agent: str
    edge_or_node: str
    detail: dict[str, Any]

    @classmethod
    def from_event(cls, event: Event[SimulationEvent]) -> "LogRecord":
        data = event.data
        return cls(
            time=event.time,
            kind=data.kind,
            agent=data.agent_id,
            edge_or_node=data.ref,
            detail=data.detail(),
        )

    def to_payload(self) -> SimulationEvent:
        try:
            payload_type = SimulationEvent.registry[self.kind]
        except KeyError:
            raise TerminalSimError(f"unknown event kind {self.kind!r}") from None
        fields = {**self.detail, "agent_id": self.agent, payload_type.ref_field: self.edge_or_node}
        return payload_type.model_validate(fields)


class EventLog:
    """Append-only event storage kept per producer.

    Each producer appends its events in its own sequence order;
    :meth:`merged` interleaves them by ``(time, source, sequence)``.
    """

    def __init__(self) -> None:
        self.by_source: dict[str, list[Event[SimulationEvent]]] = defaultdict(list)

    def append(self, events: Iterable[Event[SimulationEvent]]) -> None:
        for event in events:
            self.by_source[event.source].append(event)

    def __len__(self) -> int:
        return sum(len(events) for events in self.by_source.values())

    def merged(self) -> list[Event[SimulationEvent]]:
        streams = [self.by_source[source] for source in sorted(self.by_source)]
        return list(heapq.merge(*streams, key=lambda e: (e.time, e.source, e.sequence)))

    def __iter__(self) -> Iterator[Event[SimulationEvent]]:
        return iter(self.merged())

    def write_ndjson(self, path: Path | str) -> Path:
        return write_ndjson(self.merged(), path)


def write_ndjson(events: Iterable[Event[SimulationEvent]], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for event in events:
            handle.write(LogRecord.from_event(event).model_dump_json())
            handle.write("\n")
    return path


def read_ndjson(path: Path | str) -> list[Event[SimulationEvent]]:
    """Load an event log written by :func:`write_ndjson`.

    Events keep the file order; their source is ``log`` and their sequence
    the line number.

    Raises:
        TerminalSimError: On a malformed line or an unknown event kind.
    """
    path = Path(path)
    events: list[Event[SimulationEvent]] = []
    with path.open(encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = LogRecord.model_validate_json(line)
                payload = record.to_payload()
            except ValidationError as exc:
                raise TerminalSimError(f"{path}: line {number}: {exc.errors()[0]['msg']}") from None
            events.append(
                Event[SimulationEvent](
                    time=record.time, source=LOG_SOURCE, sequence=number, data=payload
                )
            )
    LOGGER.debug("Read event log", extra={"path": str(path), "events": len(events)})
    return events
