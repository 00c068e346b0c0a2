"""Tests for local density maps."""

import numpy as np
import pytest

from terminalsim.metrics import DensityProbe, density_map


# Density map


def test_single_person():
    occupancy = np.zeros((9, 9), dtype=bool)
    occupancy[4, 4] = True

    densities = density_map(occupancy)

    assert densities.shape == (9, 9)
    assert densities[4, 4] == pytest.approx(0.25)
    assert densities[2, 6] == pytest.approx(0.25)
    assert densities[1, 4] == 0.0


def test_full_window():
    densities = density_map(np.ones((5, 5)))

    assert densities[2, 2] == pytest.approx(6.25)
    assert densities[0, 0] == pytest.approx(9 / 4)


@pytest.mark.parametrize("window", [0, 4])
def test_window_must_be_odd(window: int):
    with pytest.raises(ValueError, match="odd"):
        density_map(np.zeros((3, 3)), window)


# Density probe


def test_keeps_peak():
    probe = DensityProbe(window=1)
    sparse = np.zeros((3, 3))
    sparse[1, 2] = 1.0

    probe.observe(0.0, np.zeros((3, 3)))
    probe.observe(0.5, sparse)
    probe.observe(1.0, np.zeros((3, 3)))

    assert probe.peak == pytest.approx(6.25)
    assert probe.peak_time == 0.5
    assert probe.peak_cell == (1, 2)
    assert [t for t, _ in probe.samples] == [0.0, 0.5, 1.0]
