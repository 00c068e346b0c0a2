"""Agent populations: demand CSV files, generated demand and presets.

Demand CSV header::

    agent_id,origin,destination,departure_s,group

Group tags of the form ``<cycle>:<phase>`` (``WH:board``,
``WH:disembark``) are what the landing-cycle report groups by.
"""

import csv
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..domain.exceptions import ScenarioError

LOGGER = logging.getLogger(__name__)

DEMAND_COLUMNS = ("agent_id", "origin", "destination", "departure_s", "group")


class DemandEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    agent_id: str = Field(min_length=1)
    origin: str = Field(min_length=1)
    destination: str = Field(min_length=1)
    departure: float = Field(ge=0)
    group: str = ""


class DemandGroup(BaseModel):
    """A homogeneous part of the population.

    Departures are all at ``start`` when ``end`` is None, otherwise drawn
    uniformly from ``[start, end)``.
    """

    model_config = ConfigDict(frozen=True)

    tag: str = Field(min_length=1)
    origin: str
    destination: str
    count: int = Field(ge=0)
    start: float = Field(default=0.0, ge=0)
    end: float | None = None

    @model_validator(mode="after")
    def _check_window(self) -> "DemandGroup":
        if self.end is not None and self.end <= self.start:
            raise ValueError(f"group {self.tag!r}: departure window must not be empty")
        return self


class DemandSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    groups: tuple[DemandGroup, ...]
    seed: int = 0


def generate_demand(spec: DemandSpec) -> list[DemandEntry]:
    """Expand a demand spec into agents, deterministically for a given seed.

    Agent ids are ``<tag>:<n>`` with n counting from 1 within the group.

    Raises:
        ScenarioError: If two groups share a tag.
    """
    tags = [group.tag for group in spec.groups]
    if len(set(tags)) != len(tags):
        raise ScenarioError("demand groups must have distinct tags")
    entries: list[DemandEntry] = []
    for index, group in enumerate(spec.groups):
        if group.end is None:
            departures = np.full(group.count, group.start)
        else:
            rng = np.random.default_rng([spec.seed, index])
            departures = np.sort(rng.uniform(group.start, group.end, size=group.count))
        entries.extend(
            DemandEntry(
                agent_id=f"{group.tag}:{n}",
                origin=group.origin,
                destination=group.destination,
                departure=round(float(departure), 6),
                group=group.tag,
            )
            for n, departure in enumerate(departures, start=1)
        )
    LOGGER.debug("Generated demand", extra={"agents": len(entries), "groups": len(spec.groups)})
    return entries


DEMAND_PRESETS: dict[str, tuple[int, int]] = {
    "observed_peak": (1400, 850),
    "projection_2017": (1800, 1800),
}
"""Boarding and disembarking passengers per named demand level."""


def preset_demand(
    name: str,
    *,
    terminal: str = "WH",
    destination_terminal: str = "SG",
    boarding_start: float = 0.0,
    disembark_start: float = 0.0,
    seed: int = 0,
) -> DemandSpec:
    """Named demand levels at one terminal of the synthetic scenario.

    ``observed_peak`` is the observed peak-hour landing (1400 boarding, 850
    disembarking); ``projection_2017`` the projected 1800 passengers in each
    direction. Disembarking passengers start on the landing pier.
    """
    try:
        boarding, disembarking = DEMAND_PRESETS[name]
    except KeyError:
        raise ScenarioError(
            f"unknown demand preset {name!r}; choose from {', '.join(sorted(DEMAND_PRESETS))}"
        ) from None
    return DemandSpec(
        groups=(
            DemandGroup(
                tag=f"{terminal}:board",
                origin=f"{terminal}_STREET",
                destination=f"{destination_terminal}_EXIT",
                count=boarding,
                start=boarding_start,
            ),
            DemandGroup(
                tag=f"{terminal}:disembark",
                origin=f"{terminal}_PIER",
                destination=f"{terminal}_EXIT",
                count=disembarking,
                start=disembark_start,
            ),
        ),
        seed=seed,
    )


def load_demand(path: Path | str) -> list[DemandEntry]:
    """Read a demand CSV.

    Raises:
        ScenarioError: On a wrong header, a bad row or a duplicate agent id.
    """
    entries: list[DemandEntry] = []
    seen: set[str] = set()
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or tuple(reader.fieldnames) != DEMAND_COLUMNS:
            raise ScenarioError(f"{path}: demand header must be {','.join(DEMAND_COLUMNS)}")
        for number, row in enumerate(reader, start=2):
            try:
                entry = DemandEntry(
                    agent_id=row["agent_id"],
                    origin=row["origin"],
                    destination=row["destination"],
                    departure=float(row["departure_s"]),
                    group=row["group"] or "",
                )
            except (ValueError, ValidationError):
                raise ScenarioError(f"{path}: line {number}: invalid demand row") from None
            if entry.agent_id in seen:
                raise ScenarioError(f"{path}: line {number}: duplicate agent {entry.agent_id!r}")
            seen.add(entry.agent_id)
            entries.append(entry)
    return entries


def write_demand(entries: list[DemandEntry], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(DEMAND_COLUMNS)
        for entry in entries:
            writer.writerow(
                [
                    entry.agent_id,
                    entry.origin,
                    entry.destination,
                    repr(entry.departure),
                    entry.group,
                ]
            )
    return path
