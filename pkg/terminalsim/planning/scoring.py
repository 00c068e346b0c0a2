"""Plan scores: experienced travel time, optionally plus imposed external costs."""

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from ..multiscale import TravelRecord


class RelaxationMode(str, Enum):
    """Which equilibrium the relaxation approaches."""

    NASH = "nash"
    SYSTEM_OPTIMUM = "so"


@dataclass(frozen=True, slots=True)
class PlanScore:
    value: float
    travel_time: float
    penalized: bool = False


def score_plan(
    records: Iterable[TravelRecord],
    mode: RelaxationMode,
    *,
    complete: bool = True,
    departure: float = 0.0,
    sim_end: float | None = None,
) -> PlanScore:
    """Score the executed plan of one agent.

    Nash mode sums the time spent on every edge; system-optimum mode adds
    the external costs the agent imposed. An agent that did not arrive
    scores ``sim_end - departure`` and is flagged as penalized.
    """
    if not complete:
        if sim_end is None:
            raise ValueError("sim_end is required to score an incomplete plan")
        penalty = sim_end - departure
        return PlanScore(value=penalty, travel_time=penalty, penalized=True)
    records = list(records)
    travel_time = sum(record.travel_time for record in records)
    value = travel_time
    if mode is RelaxationMode.SYSTEM_OPTIMUM:
        value += sum(record.external_cost for record in records)
    return PlanScore(value=value, travel_time=travel_time)
