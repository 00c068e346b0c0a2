"""Shared builders and reference oracles for the test suite."""

from .grids import make_environment
from .oracles import brute_force_stats, heap_floor_field

__all__ = ["brute_force_stats", "heap_floor_field", "make_environment"]
