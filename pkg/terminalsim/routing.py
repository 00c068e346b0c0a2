"""Type-annotation based dispatch of simulation events to reducer methods."""

import inspect
from collections.abc import Callable
from functools import singledispatch
from typing import Any, TypeVar, get_args, get_origin

T = TypeVar("T")

# Marker for handlers that want the Event envelope, not just payload
_WANTS_EVENT_WRAPPER_ATTR = "_wants_event_wrapper"

_HANDLER_MARKER = "_is_event_handler"
_HANDLER_TYPE = "_handles_event_type"


def _ignore(message: object, instance: object, *args: Any, **kwargs: Any) -> object:
    return None


def _extract_handler_type(func: Callable[..., Any]) -> tuple[type, bool]:
    """Read the event type a handler accepts from its first argument annotation.

    Returns:
        A tuple ``(payload_type, wants_wrapper)``. ``wants_wrapper`` is True
        when the handler is annotated ``Event[T]`` and should receive the
        envelope (time, source, sequence) instead of the bare payload.

    Raises:
        ValueError: If the handler has no annotated event parameter.
    """
    func_name = getattr(func, "__name__", repr(func))
    params = list(inspect.signature(func).parameters.values())
    if len(params) < 2:
        raise ValueError(f"Handler {func_name} must accept an event argument")
    param = params[1]
    annotation = param.annotation
    if annotation is inspect.Parameter.empty:
        raise ValueError(
            f"Handler {func_name} parameter '{param.name}' must have a type annotation"
        )

    from .domain import Event  # Import here to avoid circular dependency

    if get_origin(annotation) is Event:
        args = get_args(annotation)
        if not args:
            raise ValueError(
                f"Handler {func_name}: Event must be parametrised, e.g. Event[EdgeLeft]"
            )
        return (args[0], True)

    # Event[T] on a pydantic generic is a concrete subclass carrying its origin
    if isinstance(annotation, type) and issubclass(annotation, Event):
        metadata = getattr(annotation, "__pydantic_generic_metadata__", None)
        if metadata and metadata.get("origin") is Event and metadata.get("args"):
            return (metadata["args"][0], True)

    return (annotation, False)


class MessageRouter:
    """Dispatches event payloads to the handler registered for their type.

    Lookup goes through ``functools.singledispatch`` so a handler declared for
    a base payload class also receives its subclasses. Types without a
    handler are ignored.
    """

    __slots__ = ("_dispatch",)

    def __init__(self) -> None:
        self._dispatch = singledispatch(_ignore)

    def register(
        self,
        message_type: type,
        handler: Callable[..., object],
        wants_wrapper: bool = False,
    ) -> None:
        if wants_wrapper:

            def wrapper(
                msg: object, inst: object, *args: Any, h: Any = handler, **kwargs: Any
            ) -> object:
                event_wrapper = kwargs.pop("event_wrapper", None)
                target = event_wrapper if event_wrapper is not None else msg
                return h(inst, target, *args, **kwargs)

            self._dispatch.register(message_type)(wrapper)
        else:

            def payload_wrapper(
                msg: object, inst: object, *args: Any, h: Any = handler, **kwargs: Any
            ) -> object:
                kwargs.pop("event_wrapper", None)
                return h(inst, msg, *args, **kwargs)

            self._dispatch.register(message_type)(payload_wrapper)

    def route(self, instance: Any, message: Any, *args: Any, **kwargs: Any) -> object:
        """Call the handler for ``type(message)`` on ``instance``.

        Pass ``event_wrapper=<Event>`` to hand the full envelope to handlers
        annotated with ``Event[T]``.
        """
        return self._dispatch(message, instance, *args, **kwargs)


def handles_event(func: Callable[..., T]) -> Callable[..., T]:
    """Mark a reducer method as the handler for the event type it annotates.

    Example:
        >>> class ArrivalCounter(EventReducer):
        ...     @handles_event
        ...     def on_arrived(self, event: AgentArrived) -> None:
        ...         self.count += 1
        ...
        ...     @handles_event
        ...     def on_left(self, event: Event[EdgeLeft]) -> None:
        ...         self.last_exit = event.time
    """
    message_type, wants_wrapper = _extract_handler_type(func)
    setattr(func, _HANDLER_TYPE, message_type)
    setattr(func, _HANDLER_MARKER, True)
    setattr(func, _WANTS_EVENT_WRAPPER_ATTR, wants_wrapper)
    return func


def setup_event_handling(cls: type) -> MessageRouter:
    """Build the routing table for a reducer class.

    Scans the class hierarchy for ``@handles_event`` methods. Handlers in a
    subclass override those registered for the same type in a base class.
    """
    router = MessageRouter()
    for klass in reversed(cls.__mro__):
        for value in klass.__dict__.values():
            if getattr(value, _HANDLER_MARKER, False):
                router.register(
                    getattr(value, _HANDLER_TYPE),
                    value,
                    wants_wrapper=getattr(value, _WANTS_EVENT_WRAPPER_ATTR, False),
                )
    return router

