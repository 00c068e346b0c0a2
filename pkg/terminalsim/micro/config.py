"""Cellular automaton parameters, configurable through the environment."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..environment.grid import CELL_SIDE, DEFAULT_FREE_SPEED


class CaConfig(BaseSettings):
    """Parameters of the microscopic model.

    All settings can be supplied through environment variables with the
    ``TERMINALSIM_CA_`` prefix, e.g. ``TERMINALSIM_CA_CONFLICT_FRICTION=0.2``.

    Attributes:
        timestep: Seconds per CA step. The default makes one cell per step
            equal the free walking speed of 1.34 m/s.
        move_probability_waiting: Chance that an agent waiting for a gate
            moves at all in a step.
        waiting_wander_weight: Sharpness of the waiting agents' bias towards
            the gate; neighbours are weighted by ``exp(-weight * distance)``.
        rng_seed: Seed of the per-run random generator.
        conflict_friction: Chance that two agents contending for a cell
            both stay put.
        waiting_distance: Distance to a closed gate (metres) at which an
            agent switches to the waiting state.
        log_moves: Emit a ``move`` event for every cell change.
    """

    timestep: float = Field(default=CELL_SIDE / DEFAULT_FREE_SPEED, gt=0)
    move_probability_waiting: float = Field(default=0.3, ge=0.0, le=1.0)
    waiting_wander_weight: float = Field(default=0.5, ge=0.0)
    rng_seed: int = 0
    conflict_friction: float = Field(default=0.0, ge=0.0, le=1.0)
    waiting_distance: float = Field(default=4.0, ge=0.0)
    log_moves: bool = False

    model_config = SettingsConfigDict(env_prefix="TERMINALSIM_CA_", frozen=True)
