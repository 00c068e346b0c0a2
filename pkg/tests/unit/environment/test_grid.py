"""Tests for grid environments and targets."""

import pytest

from terminalsim.domain.exceptions import EnvironmentDocumentError, UnknownTargetError
from terminalsim.environment import CellKind, GridEnvironment, Target, TargetKind
from terminalsim.environment.grid import geometric_median_cell
from tests.fixtures import make_environment


# Grid environment


def test_shape_and_cell_kinds():
    env = make_environment(["A.#", "..."], kinds={"A": TargetKind.FINAL})

    assert env.shape == (2, 3)
    assert env.kind_at((0, 0)) is CellKind.TARGET
    assert env.kind_at((0, 1)) is CellKind.WALKABLE
    assert env.kind_at((0, 2)) is CellKind.OBSTACLE
    assert not env.traversable[0, 2]


def test_unknown_target(corridor: GridEnvironment):
    """Looking up an undefined target names target and environment."""
    with pytest.raises(UnknownTargetError, match="'Z'.*'corridor'"):
        corridor.target("Z")


def test_node_binding():
    """Bound targets return their node; others get an env-scoped name."""
    env = make_environment(["A..B."], "hall", nodes={"A": "STREET"})

    assert env.node_of("A") == "STREET"
    assert env.node_of("B") == "hall.B"
    assert env.border_nodes == [("A", "STREET")]


def test_final_target_must_touch_border():
    with pytest.raises(EnvironmentDocumentError, match="not on the border"):
        make_environment([".....", "..A..", "....."], kinds={"A": TargetKind.FINAL})


def test_target_must_be_connected():
    """Target cells must form one 4-connected component."""
    with pytest.raises(EnvironmentDocumentError, match="4-connected"):
        make_environment(["A.A"])


def test_diagonal_only_contact_is_not_connected():
    with pytest.raises(EnvironmentDocumentError, match="4-connected"):
        make_environment(["A.", ".A"])


def test_label_without_target():
    """Every label in the grid needs a target definition."""
    with pytest.raises(EnvironmentDocumentError, match="no attribute line"):
        GridEnvironment(id="x", rows=("A..",), targets=())


def test_only_final_targets_bind_nodes():
    with pytest.raises(EnvironmentDocumentError, match="only final targets"):
        GridEnvironment(
            id="x",
            rows=("A..",),
            targets=(Target("A", TargetKind.INTERMEDIATE, frozenset({(0, 0)}), node="N"),),
        )


def test_rejects_other_cell_side():
    with pytest.raises(EnvironmentDocumentError, match="cell_side"):
        GridEnvironment(id="x", rows=("...",), targets=(), cell_side=0.5)


def test_rejects_ragged_rows():
    with pytest.raises(EnvironmentDocumentError, match="equal width"):
        GridEnvironment(id="x", rows=("...", ".."), targets=())


# Target center


def test_center_of_row():
    """The median cell of a straight run is its middle."""
    assert geometric_median_cell(frozenset({(0, 0), (0, 1), (0, 2)})) == (0, 1)


def test_tie_breaks_to_lowest_cell():
    """With an even run, the lower (row, col) of the two middles wins."""
    assert geometric_median_cell(frozenset({(0, c) for c in range(4)})) == (0, 1)
