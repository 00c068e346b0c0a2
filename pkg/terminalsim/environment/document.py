"""Reading and writing environment documents.

Document layout::

    width=13
    height=9
    id=WH
    speed=1.34
    [grid]
    ....A........
    ...
    [targets]
    target A kind=final node=WH_STREET
    target D kind=delaying delay=exp:3
    target G kind=scheduled schedule=wh_gate_1 cells=4:7;4:8

Header keys are ``width``, ``height``, ``id`` (defaults to the file stem),
``speed`` (free walking speed s_a in m/s) and ``cell_side`` (must be 0.4).
Blank lines are ignored everywhere except inside the grid section.
"""

import logging
from pathlib import Path

from ..domain import Cell
from ..domain.exceptions import EnvironmentDocumentError
from .delays import parse_delay_spec
from .grid import (
    CELL_SIDE,
    DEFAULT_FREE_SPEED,
    OBSTACLE,
    TARGET_LABELS,
    WALKABLE,
    GridEnvironment,
    Target,
    TargetKind,
)

LOGGER = logging.getLogger(__name__)

_HEADER_KEYS = frozenset({"width", "height", "id", "speed", "cell_side"})
_TARGET_KEYS = frozenset({"kind", "delay", "schedule", "node", "cells"})


def load_environment(path: Path | str) -> GridEnvironment:
    """Load an environment document from disk; the id defaults to the file stem."""
    path = Path(path)
    env = parse_environment(path.read_text(encoding="utf-8"), default_id=path.stem)
    LOGGER.debug(
        "Loaded environment",
        extra={"env_id": env.id, "path": str(path), "targets": len(env.targets)},
    )
    return env


def parse_environment(text: str, default_id: str = "env") -> GridEnvironment:
    """Parse environment document text.

    Raises:
        EnvironmentDocumentError: On malformed input, unknown keys, cells
            outside the grid, a target overlapping an obstacle, duplicate
            target ids or a final target off the border.
    """
    lines = text.splitlines()
    header: dict[str, str] = {}
    index = 0

    while index < len(lines) and lines[index].strip() != "[grid]":
        line = lines[index].strip()
        index += 1
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or key.strip() not in _HEADER_KEYS:
            raise EnvironmentDocumentError(f"unexpected header line {line!r}", index)
        header[key.strip()] = value.strip()
    if index == len(lines):
        raise EnvironmentDocumentError("missing [grid] section")
    index += 1

    try:
        width = int(header["width"])
        height = int(header["height"])
        speed = float(header.get("speed", DEFAULT_FREE_SPEED))
        cell_side = float(header.get("cell_side", CELL_SIDE))
    except KeyError as exc:
        raise EnvironmentDocumentError(f"missing header {exc.args[0]!r}") from None
    except ValueError as exc:
        raise EnvironmentDocumentError(f"invalid header value: {exc}") from None
    if width <= 0 or height <= 0:
        raise EnvironmentDocumentError("width and height must be positive")

    grid: list[list[str]] = []
    for _ in range(height):
        if index >= len(lines):
            raise EnvironmentDocumentError(f"grid has fewer than {height} rows", index)
        row = lines[index]
        index += 1
        if len(row) != width:
            raise EnvironmentDocumentError(
                f"grid row has {len(row)} cells, expected {width}", index
            )
        for ch in row:
            if ch not in TARGET_LABELS and ch not in (WALKABLE, OBSTACLE):
                raise EnvironmentDocumentError(f"invalid cell character {ch!r}", index)
        grid.append(list(row))

    while index < len(lines) and not lines[index].strip():
        index += 1
    if index < len(lines):
        if lines[index].strip() != "[targets]":
            raise EnvironmentDocumentError("expected [targets] section after the grid", index + 1)
        index += 1

    attributes: dict[str, dict[str, str]] = {}
    for number in range(index, len(lines)):
        line = lines[number].strip()
        if not line:
            continue
        label, attrs = _parse_target_line(line, number + 1)
        if label in attributes:
            raise EnvironmentDocumentError(f"duplicate target id {label!r}", number + 1)
        for r, c in _parse_cells(attrs.get("cells", ""), number + 1):
            if not (0 <= r < height and 0 <= c < width):
                raise EnvironmentDocumentError(f"cell {r}:{c} outside the grid", number + 1)
            if grid[r][c] == OBSTACLE:
                raise EnvironmentDocumentError("target/obstacle overlap", number + 1)
            if grid[r][c] not in (WALKABLE, label):
                raise EnvironmentDocumentError(
                    f"cell {r}:{c} already belongs to target {grid[r][c]!r}", number + 1
                )
            grid[r][c] = label
        attributes[label] = attrs

    rows = tuple("".join(row) for row in grid)
    targets = tuple(_build_target(label, attrs, rows) for label, attrs in attributes.items())
    return GridEnvironment(
        id=header.get("id", default_id),
        rows=rows,
        targets=targets,
        free_speed=speed,
        cell_side=cell_side,
    )


def _parse_target_line(line: str, number: int) -> tuple[str, dict[str, str]]:
    parts = line.split()
    if len(parts) < 2 or parts[0] != "target":
        raise EnvironmentDocumentError(f"expected 'target <label> ...', got {line!r}", number)
    label = parts[1]
    if label not in TARGET_LABELS:
        raise EnvironmentDocumentError(f"invalid target label {label!r}", number)
    attrs: dict[str, str] = {}
    for part in parts[2:]:
        key, sep, value = part.partition("=")
        if not sep or key not in _TARGET_KEYS:
            raise EnvironmentDocumentError(f"unexpected target attribute {part!r}", number)
        attrs[key] = value
    if "kind" not in attrs:
        raise EnvironmentDocumentError(f"target {label!r} has no kind", number)
    try:
        kind = TargetKind(attrs["kind"])
    except ValueError:
        raise EnvironmentDocumentError(f"unknown target kind {attrs['kind']!r}", number) from None
    if kind is TargetKind.DELAYING and "delay" not in attrs:
        raise EnvironmentDocumentError(f"delaying target {label!r} needs delay=", number)
    if kind is TargetKind.SCHEDULED and "schedule" not in attrs:
        raise EnvironmentDocumentError(f"scheduled target {label!r} needs schedule=", number)
    if "delay" in attrs:
        try:
            parse_delay_spec(attrs["delay"])
        except ValueError as exc:
            raise EnvironmentDocumentError(str(exc), number) from None
    return label, attrs


def _parse_cells(text: str, number: int) -> list[Cell]:
    cells: list[Cell] = []
    for item in filter(None, text.split(";")):
        row, sep, col = item.partition(":")
        try:
            cells.append((int(row), int(col)))
        except ValueError:
            raise EnvironmentDocumentError(f"invalid cell {item!r}", number) from None
        if not sep:
            raise EnvironmentDocumentError(f"invalid cell {item!r}", number)
    return cells


def _build_target(label: str, attrs: dict[str, str], rows: tuple[str, ...]) -> Target:
    cells = frozenset(
        (r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == label
    )
    return Target(
        id=label,
        kind=TargetKind(attrs["kind"]),
        cells=cells,
        delay=parse_delay_spec(attrs["delay"]) if "delay" in attrs else None,
        schedule_id=attrs.get("schedule"),
        node=attrs.get("node"),
    )


def dump_environment(env: GridEnvironment) -> str:
    """Render an environment as document text that parses back to an equal one."""
    lines = [
        f"width={env.width}",
        f"height={env.height}",
        f"id={env.id}",
        f"speed={env.free_speed!r}",
        "[grid]",
        *env.rows,
        "[targets]",
    ]
    for target in env.targets:
        parts = ["target", target.id, f"kind={target.kind.value}"]
        if target.delay is not None:
            parts.append(f"delay={target.delay.spec()}")
        if target.schedule_id is not None:
            parts.append(f"schedule={target.schedule_id}")
        if target.node is not None:
            parts.append(f"node={target.node}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def write_environment(env: GridEnvironment, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(dump_environment(env), encoding="utf-8")
    return path
