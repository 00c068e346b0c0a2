"""FIFO queue links with a travel-time floor, flow capacity and storage capacity."""

import logging
import math
from collections import deque
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from ..environment.grid import MAX_DENSITY

LOGGER = logging.getLogger(__name__)


def derived_storage_capacity(area_m2: float) -> int:
    """Storage capacity of a link whose document leaves it empty."""
    return max(1, math.floor(area_m2 * MAX_DENSITY))


class LinkSpec(BaseModel):
    """Static description of one meso link.

    Attributes:
        id: Link id, also the id of its edge in the global graph.
        from_node: Upstream global node.
        to_node: Downstream global node.
        length_m: Length l in metres.
        area_m2: Walkable area A in square metres.
        free_speed: Free speed v̂ in m/s.
        flow_capacity: FC in agents per second.
        storage_capacity: SC in agents; None derives it from the area.
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    from_node: str = Field(min_length=1)
    to_node: str = Field(min_length=1)
    length_m: float = Field(gt=0)
    area_m2: float = Field(gt=0)
    free_speed: float = Field(gt=0)
    flow_capacity: float = Field(gt=0)
    storage_capacity: int | None = Field(default=None, ge=1)

    @property
    def t_min(self) -> float:
        return self.length_m / self.free_speed

    @property
    def sc(self) -> int:
        if self.storage_capacity is not None:
            return self.storage_capacity
        return derived_storage_capacity(self.area_m2)


@dataclass(frozen=True, slots=True)
class QueueSlot:
    agent_id: str
    entered_at: float
    earliest_exit: float


class MesoLink:
    """Runtime state of a link: the queue and the outflow credit.

    Example:
        >>> link = MesoLink(LinkSpec(id="L", from_node="O", to_node="D", length_m=10,
        ...                          area_m2=4, free_speed=1, flow_capacity=1))
        >>> link.try_enter("a1", 0.0)
        True
        >>> [slot.agent_id for slot in link.advance(10.0, 1.0)]
        ['a1']
    """

    def __init__(self, spec: LinkSpec):
        self.spec = spec
        self.queue: deque[QueueSlot] = deque()
        self.outflow_credit = 0.0
        self.entries = 0
        self.exits = 0

    @property
    def id(self) -> str:
        return self.spec.id

    def __len__(self) -> int:
        return len(self.queue)

    def __iter__(self) -> Iterator[QueueSlot]:
        return iter(self.queue)

    def has_room(self) -> bool:
        return len(self.queue) < self.spec.sc

    def try_enter(self, agent_id: str, t: float) -> bool:
        """Append the agent if the queue is below storage capacity."""
        if not self.has_room():
            return False
        self.queue.append(QueueSlot(agent_id, t, t + self.spec.t_min))
        self.entries += 1
        return True

    def advance(
        self, t: float, dt: float, accept: Callable[[str], bool] | None = None
    ) -> list[QueueSlot]:
        """Release agents from the head of the queue at time ``t``.

        ``accept`` is asked for every candidate in turn; a refusal blocks
        the head (and therefore the whole queue) until the next step.
        """
        spec = self.spec
        self.outflow_credit = min(self.outflow_credit + spec.flow_capacity * dt, float(spec.sc))
        released: list[QueueSlot] = []
        while self.queue and self.outflow_credit >= 1.0:
            head = self.queue[0]
            if head.earliest_exit > t:
                break
            if accept is not None and not accept(head.agent_id):
                LOGGER.debug(
                    "Release blocked downstream",
                    extra={"link_id": spec.id, "agent_id": head.agent_id},
                )
                break
            self.queue.popleft()
            self.outflow_credit -= 1.0
            self.exits += 1
            released.append(head)
        return released
