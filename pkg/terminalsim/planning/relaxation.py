"""Iterative best-response relaxation towards Nash equilibrium or system optimum.

Each iteration simulates the current plans, scores every agent and lets a
random share of the population re-route on the edge costs experienced in
that iteration. Departure times never change.
"""

import csv
import logging
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..domain import Plan
from ..environment import FloorField, compute_floor_fields
from ..micro import CaConfig
from ..multiscale import GlobalGraph, MultiscaleSimulation, SimulationResult
from ..multiscale.simulation import AgentStatus
from ..scenario import Scenario
from .router import Router
from .scoring import PlanScore, RelaxationMode, score_plan

LOGGER = logging.getLogger(__name__)

HISTORY_COLUMNS = ("iteration", "mode", "avg_score_s", "max_score_s", "relative_gap")


class RelaxationConfig(BaseSettings):
    """Parameters of the relaxation loop (prefix ``TERMINALSIM_RELAX_``).

    Attributes:
        mode: ``nash`` scores experienced travel time, ``so`` adds the
            external costs an agent imposes on others.
        iterations: Number of simulate/score/replan rounds.
        replan_fraction: Share of agents re-routed after each iteration.
        rng_seed: Seed of the replanning selection.
    """

    mode: RelaxationMode = RelaxationMode.NASH
    iterations: int = Field(default=30, ge=1)
    replan_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    rng_seed: int = 0

    model_config = SettingsConfigDict(env_prefix="TERMINALSIM_RELAX_", frozen=True)


@dataclass
class IterationStats:
    """Summary of one iteration.

    ``route_counts`` maps every OD pair to the number of agents per node
    sequence; ``route_times`` to the average travel time per node sequence.
    """

    iteration: int
    mode: RelaxationMode
    avg_score: float
    max_score: float
    relative_gap: float
    avg_travel_time: float
    edge_times: dict[str, float] = field(default_factory=dict)
    route_counts: dict[tuple[str, str], dict[tuple[str, ...], int]] = field(default_factory=dict)
    route_times: dict[tuple[str, str], dict[tuple[str, ...], float]] = field(
        default_factory=dict
    )
    penalized: int = 0


@dataclass
class RelaxationResult:
    history: list[IterationStats]
    plans: list[Plan]
    last_run: SimulationResult


def score_run(
    plans: list[Plan], result: SimulationResult, mode: RelaxationMode
) -> dict[str, PlanScore]:
    """Score every plan of an executed run."""
    records = result.records_by_agent()
    return {
        plan.agent_id: score_plan(
            records.get(plan.agent_id, []),
            mode,
            complete=result.statuses.get(plan.agent_id) is AgentStatus.ARRIVED,
            departure=plan.departure,
            sim_end=result.sim_end,
        )
        for plan in plans
    }


def experienced_edge_costs(
    result: SimulationResult, mode: RelaxationMode, graph: GlobalGraph
) -> dict[str, float]:
    """Average cost per edge in ``result``; unused edges keep their free travel time."""
    totals: dict[str, float] = defaultdict(float)
    counts: dict[str, int] = defaultdict(int)
    for record in result.records:
        cost = record.travel_time
        if mode is RelaxationMode.SYSTEM_OPTIMUM:
            cost += record.external_cost
        totals[record.edge_id] += cost
        counts[record.edge_id] += 1
    costs = graph.free_costs()
    for edge_id, total in totals.items():
        if edge_id in costs:
            costs[edge_id] = total / counts[edge_id]
    return costs


def relative_gap(route_times: Mapping[tuple[str, str], Mapping[tuple[str, ...], float]]) -> float:
    """Largest (max - min) / min spread of route average times over OD pairs."""
    gap = 0.0
    for times in route_times.values():
        if len(times) < 2:
            continue
        low, high = min(times.values()), max(times.values())
        if low > 0:
            gap = max(gap, (high - low) / low)
    return gap


def summarize_iteration(
    iteration: int,
    mode: RelaxationMode,
    plans: list[Plan],
    scores: Mapping[str, PlanScore],
    result: SimulationResult,
) -> IterationStats:
    route_totals: dict[tuple[str, str], dict[tuple[str, ...], list[float]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for plan in plans:
        route_totals[(plan.origin, plan.destination)][plan.nodes].append(
            scores[plan.agent_id].travel_time
        )
    route_counts = {
        od: {nodes: len(times) for nodes, times in sorted(routes.items())}
        for od, routes in sorted(route_totals.items())
    }
    route_times = {
        od: {nodes: sum(times) / len(times) for nodes, times in sorted(routes.items())}
        for od, routes in sorted(route_totals.items())
    }
    edge_totals: dict[str, list[float]] = defaultdict(list)
    for record in result.records:
        edge_totals[record.edge_id].append(record.travel_time)
    values = [score.value for score in scores.values()]
    travel_times = [score.travel_time for score in scores.values()]
    return IterationStats(
        iteration=iteration,
        mode=mode,
        avg_score=float(np.mean(values)) if values else 0.0,
        max_score=float(np.max(values)) if values else 0.0,
        relative_gap=relative_gap(route_times),
        avg_travel_time=float(np.mean(travel_times)) if travel_times else 0.0,
        edge_times={edge: float(np.mean(times)) for edge, times in sorted(edge_totals.items())},
        route_counts=route_counts,
        route_times=route_times,
        penalized=sum(score.penalized for score in scores.values()),
    )


def initial_plans(scenario: Scenario, router: Router | None = None) -> list[Plan]:
    """Shortest paths on free travel times for the whole demand."""
    router = router if router is not None else Router(scenario.graph)
    return [
        Plan(
            agent_id=entry.agent_id,
            nodes=router.route(entry.origin, entry.destination),
            departure=entry.departure,
            group=entry.group,
        )
        for entry in scenario.demand
    ]


def replan(
    plans: list[Plan], costs: Mapping[str, float], graph: GlobalGraph, fraction: float, seed: int
) -> tuple[list[Plan], list[int]]:
    """Best responses for a seeded random share of the agents.

    Returns the new plan list and the indices of the replanned agents.
    """
    if fraction <= 0.0 or not plans:
        return list(plans), []
    # any positive share replans at least one agent
    count = min(len(plans), max(1, round(fraction * len(plans))))
    chosen = sorted(int(i) for i in np.random.default_rng(seed).choice(len(plans), count, False))
    router = Router(graph, costs)
    updated = list(plans)
    for index in chosen:
        plan = plans[index]
        updated[index] = plan.model_copy(
            update={"nodes": router.route(plan.origin, plan.destination)}
        )
    return updated, chosen


def relax(
    scenario: Scenario,
    config: RelaxationConfig | None = None,
    ca_config: CaConfig | None = None,
    navigation_fields: Mapping[str, Mapping[str, FloorField]] | None = None,
) -> RelaxationResult:
    """Run the simulate, score and replan loop for ``config.iterations`` rounds.

    With a single iteration this is a pure shortest-path assignment.
    """
    config = config if config is not None else RelaxationConfig()
    ca_config = ca_config if ca_config is not None else CaConfig()
    graph = scenario.graph
    if navigation_fields is None:
        navigation_fields = {
            env.id: compute_floor_fields(env, isolate_targets=False)
            for env in scenario.environments
        }
    plans = initial_plans(scenario)
    history: list[IterationStats] = []
    result: SimulationResult | None = None

    for iteration in range(1, config.iterations + 1):
        run_config = ca_config.model_copy(update={"rng_seed": ca_config.rng_seed + iteration})
        simulation = MultiscaleSimulation(
            graph,
            scenario.environments,
            scenario.links,
            scenario.schedules_by_id,
            scenario.sim_end,
            config=run_config,
            navigation_fields=navigation_fields,
        )
        result = simulation.run(plans)
        scores = score_run(plans, result, config.mode)
        plans = [plan.model_copy(update={"score": scores[plan.agent_id].value}) for plan in plans]
        stats = summarize_iteration(iteration, config.mode, plans, scores, result)
        history.append(stats)
        LOGGER.info(
            "Relaxation iteration finished",
            extra={
                "iteration": iteration,
                "mode": config.mode.value,
                "avg_score": stats.avg_score,
                "relative_gap": stats.relative_gap,
            },
        )
        if iteration < config.iterations:
            costs = experienced_edge_costs(result, config.mode, graph)
            plans, _ = replan(
                plans, costs, graph, config.replan_fraction, config.rng_seed + iteration
            )

    assert result is not None
    return RelaxationResult(history=history, plans=plans, last_run=result)


def write_history(history: list[IterationStats], path: Path | str) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(HISTORY_COLUMNS)
        for stats in history:
            writer.writerow(
                [
                    stats.iteration,
                    stats.mode.value,
                    f"{stats.avg_score:.6f}",
                    f"{stats.max_score:.6f}",
                    f"{stats.relative_gap:.6f}",
                ]
            )
    return path
