"""Scenario manifests: one file naming the documents of a scenario.

Example::

    # synthetic-terminal
    environment=environments/WH.env
    environment=environments/SG.env
    network=network.csv
    schedules=schedules.csv
    demand=demand.csv
    sim_end=2400
    seed=7
    mode=nash
    iterations=30
    replan_fraction=0.1

Relative paths are resolved against the manifest's directory.
"""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..domain.exceptions import ScenarioError

_SCALAR_KEYS = frozenset(
    {"network", "schedules", "demand", "sim_end", "seed", "mode", "iterations", "replan_fraction"}
)


class ScenarioManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    environments: tuple[Path, ...] = ()
    network: Path | None = None
    schedules: Path | None = None
    demand: Path
    sim_end: float = Field(gt=0)
    seed: int = 0
    mode: Literal["nash", "so"] = "nash"
    iterations: int = Field(default=1, ge=1)
    replan_fraction: float = Field(default=0.1, gt=0, le=1)


def parse_manifest(text: str, base_dir: Path | str = ".") -> ScenarioManifest:
    """Parse manifest text; ``environment`` may repeat, other keys may not.

    Raises:
        ScenarioError: On unknown or repeated keys and invalid values.
    """
    base = Path(base_dir)
    environments: list[Path] = []
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ScenarioError(f"manifest line {number}: expected key=value")
        if key == "environment":
            environments.append(base / value)
        elif key in _SCALAR_KEYS:
            if key in values:
                raise ScenarioError(f"manifest line {number}: {key!r} given twice")
            values[key] = value
        else:
            raise ScenarioError(f"manifest line {number}: unknown key {key!r}")
    for key in ("network", "schedules", "demand"):
        if key in values:
            values[key] = str(base / values[key])
    try:
        return ScenarioManifest.model_validate({**values, "environments": environments})
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error["loc"])
        raise ScenarioError(f"manifest: {where}: {error['msg']}") from None


def load_manifest(path: Path | str) -> ScenarioManifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), base_dir=path.parent)


def dump_manifest(manifest: ScenarioManifest, base_dir: Path | str = ".") -> str:
    """Render a manifest with paths relative to ``base_dir`` where possible."""
    base = Path(base_dir)

    def rel(path: Path) -> str:
        try:
            return path.relative_to(base).as_posix()
        except ValueError:
            return path.as_posix()

    lines = [f"environment={rel(path)}" for path in manifest.environments]
    if manifest.network is not None:
        lines.append(f"network={rel(manifest.network)}")
    if manifest.schedules is not None:
        lines.append(f"schedules={rel(manifest.schedules)}")
    lines += [
        f"demand={rel(manifest.demand)}",
        f"sim_end={manifest.sim_end!r}",
        f"seed={manifest.seed}",
        f"mode={manifest.mode}",
        f"iterations={manifest.iterations}",
        f"replan_fraction={manifest.replan_fraction!r}",
    ]
    return "\n".join(lines) + "\n"
