"""Reducers that fold the merged event stream into derived state.

A reducer subclasses :class:`EventReducer` and declares one method per event
type it cares about with ``@handles_event``. Routing is set up when the
subclass is defined, from the handler annotations:

- a handler annotated with a payload type (``event: EdgeLeft``) receives the
  payload only;
- a handler annotated ``event: Event[EdgeLeft]`` receives the envelope and
  can read the event time and source.

Reducers are synchronous and deterministic: replaying the same stream
through a fresh reducer yields the same state.
"""

from collections.abc import Iterable
from typing import TYPE_CHECKING, Any, ClassVar, TypeVar

from .domain import Event
from .routing import setup_event_handling

if TYPE_CHECKING:
    from .routing import MessageRouter

R = TypeVar("R", bound="EventReducer")


class EventReducer:
    """Base class for deterministic consumers of simulation events.

    Example:
        >>> class Arrivals(EventReducer):
        ...     def __init__(self) -> None:
        ...         self.times: list[float] = []
        ...
        ...     @handles_event
        ...     def on_arrived(self, event: Event[AgentArrived]) -> None:
        ...         self.times.append(event.time)
        >>>
        >>> arrivals = Arrivals().replay(log.merged())
    """

    _event_router: ClassVar["MessageRouter"]

    def __init_subclass__(cls, **kwargs: object) -> None:
        super().__init_subclass__(**kwargs)
        cls._event_router = setup_event_handling(cls)

    def handle(self, event: Event[Any]) -> object:
        """Route one event to its handler; unhandled types are ignored."""
        return self._event_router.route(self, event.data, event_wrapper=event)

    def replay(self: R, events: Iterable[Event[Any]]) -> R:
        for event in events:
            self.handle(event)
        return self
