"""Builders for small grid environments."""

from collections.abc import Mapping

from terminalsim.environment import (
    DEFAULT_FREE_SPEED,
    DelayDistribution,
    GridEnvironment,
    Target,
    TargetKind,
)
from terminalsim.environment.grid import TARGET_LABELS


def make_environment(
    rows: list[str] | tuple[str, ...],
    env_id: str = "room",
    *,
    kinds: Mapping[str, TargetKind] | None = None,
    nodes: Mapping[str, str] | None = None,
    delays: Mapping[str, DelayDistribution] | None = None,
    schedules: Mapping[str, str] | None = None,
    speed: float = DEFAULT_FREE_SPEED,
) -> GridEnvironment:
    """Environment from grid rows; unlisted labels become intermediate targets."""
    kinds = dict(kinds or {})
    nodes = dict(nodes or {})
    delays = dict(delays or {})
    schedules = dict(schedules or {})
    for label in nodes:
        kinds.setdefault(label, TargetKind.FINAL)
    for label in delays:
        kinds.setdefault(label, TargetKind.DELAYING)
    for label in schedules:
        kinds.setdefault(label, TargetKind.SCHEDULED)

    labels = sorted({ch for row in rows for ch in row} & TARGET_LABELS)
    targets = tuple(
        Target(
            id=label,
            kind=kinds.get(label, TargetKind.INTERMEDIATE),
            cells=frozenset(
                (r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == label
            ),
            delay=delays.get(label),
            schedule_id=schedules.get(label),
            node=nodes.get(label),
        )
        for label in labels
    )
    return GridEnvironment(id=env_id, rows=tuple(rows), targets=targets, free_speed=speed)
