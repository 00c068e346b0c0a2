"""Scenario assembly: documents in, validated scenario and global graph out."""

import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal

from ..domain.exceptions import ScenarioError
from ..environment import GridEnvironment, TargetKind, load_environment, write_environment
from ..meso import LinkSpec, load_network, write_network
from ..micro import GateSchedule, load_schedules, write_schedules
from ..multiscale import GlobalGraph
from .demand import DemandEntry, load_demand, write_demand
from .manifest import ScenarioManifest, dump_manifest, load_manifest

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to simulate or relax one scenario.

    Build instances with :func:`assemble` so cross references are checked.
    """

    environments: tuple[GridEnvironment, ...]
    links: tuple[LinkSpec, ...]
    schedules: tuple[GateSchedule, ...]
    demand: tuple[DemandEntry, ...]
    sim_end: float
    seed: int = 0
    mode: Literal["nash", "so"] = "nash"
    iterations: int = 1
    replan_fraction: float = 0.1

    @cached_property
    def graph(self) -> GlobalGraph:
        return GlobalGraph(self.environments, self.links)

    @property
    def schedules_by_id(self) -> dict[str, GateSchedule]:
        return {schedule.id: schedule for schedule in self.schedules}

    def environment(self, env_id: str) -> GridEnvironment:
        for env in self.environments:
            if env.id == env_id:
                return env
        raise ScenarioError(f"unknown environment {env_id!r}")


def assemble(
    environments: Iterable[GridEnvironment],
    links: Iterable[LinkSpec],
    schedules: Iterable[GateSchedule],
    demand: Iterable[DemandEntry],
    sim_end: float,
    *,
    seed: int = 0,
    mode: Literal["nash", "so"] = "nash",
    iterations: int = 1,
    replan_fraction: float = 0.1,
) -> Scenario:
    """Validate cross references and build the global graph.

    Raises:
        ScenarioError: On duplicate ids, a schedule or node id that does not
            resolve, a departure outside ``[0, sim_end)`` or an OD pair with
            no connecting path.
    """
    scenario = Scenario(
        environments=tuple(sorted(environments, key=lambda e: e.id)),
        links=tuple(sorted(links, key=lambda link: link.id)),
        schedules=tuple(sorted(schedules, key=lambda s: s.id)),
        demand=tuple(demand),
        sim_end=sim_end,
        seed=seed,
        mode=mode,
        iterations=iterations,
        replan_fraction=replan_fraction,
    )
    if sim_end <= 0:
        raise ScenarioError("sim_end must be positive")
    _check_unique("environment", [env.id for env in scenario.environments])
    _check_unique("link", [link.id for link in scenario.links])
    _check_unique("schedule", [schedule.id for schedule in scenario.schedules])
    _check_unique("agent", [entry.agent_id for entry in scenario.demand])

    schedule_ids = {schedule.id for schedule in scenario.schedules}
    for env in scenario.environments:
        for target in env.targets:
            if target.kind is TargetKind.SCHEDULED and target.schedule_id not in schedule_ids:
                raise ScenarioError(
                    f"target {target.id!r} of environment {env.id!r} references "
                    f"unknown schedule {target.schedule_id!r}"
                )

    graph = scenario.graph
    connected: dict[tuple[str, str], bool] = {}
    for entry in scenario.demand:
        for node in (entry.origin, entry.destination):
            if node not in graph:
                raise ScenarioError(f"agent {entry.agent_id!r} references unknown node {node!r}")
        if not 0 <= entry.departure < sim_end:
            raise ScenarioError(
                f"agent {entry.agent_id!r} departs at {entry.departure}, outside [0, {sim_end})"
            )
        pair = (entry.origin, entry.destination)
        if pair not in connected:
            connected[pair] = graph.has_path(*pair)
        if not connected[pair]:
            raise ScenarioError(f"no path from {pair[0]!r} to {pair[1]!r}")
    LOGGER.info(
        "Scenario assembled",
        extra={
            "environments": len(scenario.environments),
            "links": len(scenario.links),
            "agents": len(scenario.demand),
        },
    )
    return scenario


def _check_unique(kind: str, ids: list[str]) -> None:
    duplicates = sorted(item for item, count in Counter(ids).items() if count > 1)
    if duplicates:
        raise ScenarioError(f"duplicate {kind} id {duplicates[0]!r}")


def load_scenario(path: Path | str) -> Scenario:
    """Load and assemble the scenario described by a manifest file."""
    manifest = load_manifest(path)
    return scenario_from_manifest(manifest)


def scenario_from_manifest(manifest: ScenarioManifest) -> Scenario:
    try:
        environments = [load_environment(env_path) for env_path in manifest.environments]
        links = load_network(manifest.network) if manifest.network is not None else []
        schedules = load_schedules(manifest.schedules) if manifest.schedules is not None else []
        demand = load_demand(manifest.demand)
    except FileNotFoundError as exc:
        raise ScenarioError(f"missing scenario document {exc.filename}") from None
    return assemble(
        environments,
        links,
        schedules,
        demand,
        manifest.sim_end,
        seed=manifest.seed,
        mode=manifest.mode,
        iterations=manifest.iterations,
        replan_fraction=manifest.replan_fraction,
    )


def write_scenario(scenario: Scenario, directory: Path | str) -> Path:
    """Write all documents of ``scenario`` plus a manifest; returns the manifest path."""
    directory = Path(directory)
    (directory / "environments").mkdir(parents=True, exist_ok=True)
    env_paths = [
        write_environment(env, directory / "environments" / f"{env.id}.env")
        for env in scenario.environments
    ]
    network = write_network(list(scenario.links), directory / "network.csv")
    schedules = write_schedules(list(scenario.schedules), directory / "schedules.csv")
    demand = write_demand(list(scenario.demand), directory / "demand.csv")
    manifest = ScenarioManifest(
        environments=tuple(env_paths),
        network=network,
        schedules=schedules,
        demand=demand,
        sim_end=scenario.sim_end,
        seed=scenario.seed,
        mode=scenario.mode,
        iterations=scenario.iterations,
        replan_fraction=scenario.replan_fraction,
    )
    path = directory / "scenario.manifest"
    path.write_text(dump_manifest(manifest, base_dir=directory), encoding="utf-8")
    LOGGER.info("Scenario written", extra={"path": str(path)})
    return path
