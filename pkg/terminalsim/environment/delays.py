"""Delay distributions attached to delaying targets (doors, turnstiles)."""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


class DelayDistribution(ABC):
    """Distribution of the time an agent is held on a delaying target."""

    @property
    @abstractmethod
    def mean(self) -> float:
        """Expected delay in seconds."""
        ...

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> float:
        """Draw one delay in seconds."""
        ...

    @abstractmethod
    def spec(self) -> str:
        """Render the distribution in environment-document syntax."""
        ...


@dataclass(frozen=True)
class ConstantDelay(DelayDistribution):
    """Every agent is held for exactly ``seconds``."""

    seconds: float

    def __post_init__(self) -> None:
        if self.seconds < 0:
            raise ValueError("Delay must be non-negative")

    @property
    def mean(self) -> float:
        return self.seconds

    def sample(self, rng: np.random.Generator) -> float:
        return self.seconds

    def spec(self) -> str:
        return f"const:{self.seconds!r}"


@dataclass(frozen=True)
class ExponentialDelay(DelayDistribution):
    """Exponentially distributed delay with the given mean."""

    mean_seconds: float

    def __post_init__(self) -> None:
        if self.mean_seconds <= 0:
            raise ValueError("Mean delay must be positive")

    @property
    def mean(self) -> float:
        return self.mean_seconds

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.exponential(self.mean_seconds))

    def spec(self) -> str:
        return f"exp:{self.mean_seconds!r}"


def parse_delay_spec(text: str) -> DelayDistribution:
    """Parse ``<c>``, ``const:<c>`` or ``exp:<mean>`` (seconds).

    Raises:
        ValueError: If the form is unknown or the number is invalid.
    """
    family, _, value = text.partition(":")
    if not value:
        family, value = "const", family
    if family == "const":
        return ConstantDelay(float(value))
    if family == "exp":
        return ExponentialDelay(float(value))
    raise ValueError(f"Unknown delay distribution {family!r}")
