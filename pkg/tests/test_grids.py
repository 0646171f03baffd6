import numpy as np
import pytest
from scipy.interpolate import interpn

from multitime_games.grids import MultitimeGrid, StateGrid, interp, multilinear


def test_linear_data_reproduced_exactly():
    grid = StateGrid.uniform([-2.0, 0.0], [2.0, 1.0], [9, 5])
    a = np.array([1.5, -0.7])
    mesh = grid.nodes()
    values = (mesh @ a + 0.3).reshape(grid.shape)
    queries = np.random.default_rng(0).uniform([-2, 0], [2, 1], size=(50, 2))
    got, oob = multilinear(grid, values, queries)
    np.testing.assert_allclose(got, queries @ a + 0.3, atol=1e-12)
    assert oob == 0


def test_node_hit_returns_node_value():
    grid = StateGrid.uniform([0.0], [1.0], [6])
    values = np.arange(6, dtype=float) ** 2
    for i, x in enumerate(grid.axes[0]):
        assert interp(grid, values, [x]) == values[i]


def test_one_dimensional_example():
    grid = StateGrid(axes=(np.array([0.0, 1.0]),))
    assert interp(grid, np.array([0.0, 10.0]), [0.25]) == pytest.approx(2.5)


def test_clamp_vs_extrapolate_outside_box():
    grid = StateGrid.uniform([0.0], [1.0], [3])
    values = np.array([0.0, 1.0, 2.0])  # 2x
    clamped, n1 = multilinear(grid, values, np.array([[1.5]]), out_of_box="clamp")
    extended, n2 = multilinear(grid, values, np.array([[1.5]]), out_of_box="extrapolate")
    assert clamped[0] == pytest.approx(2.0)
    assert extended[0] == pytest.approx(3.0)
    assert n1 == n2 == 1


def test_out_of_box_count_per_point():
    grid = StateGrid.uniform([0.0, 0.0], [1.0, 1.0], [3, 3])
    values = np.zeros((3, 3))
    pts = np.array([[0.5, 0.5], [1.5, 0.5], [-1.0, 2.0]])
    _, oob = multilinear(grid, values, pts)
    assert oob == 2  # a point outside in two axes still counts once


def test_matches_scipy_on_random_data():
    rng = np.random.default_rng(3)
    grid = StateGrid.uniform([-1.0, 0.0], [1.0, 2.0], [7, 6])
    values = rng.normal(size=grid.shape)
    queries = rng.uniform([-1, 0], [1, 2], size=(40, 2))
    got, _ = multilinear(grid, values, queries)
    want = interpn(grid.axes, values, queries, method="linear")
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_bad_mode_rejected():
    grid = StateGrid.uniform([0.0], [1.0], [3])
    with pytest.raises(ValueError, match="out_of_box"):
        multilinear(grid, np.zeros(3), np.array([[0.5]]), out_of_box="wrap")


def test_state_grid_validation():
    with pytest.raises(ValueError):
        StateGrid(axes=(np.array([0.0]),))
    with pytest.raises(ValueError):
        StateGrid(axes=(np.array([0.0, 0.0, 1.0]),))


def test_multitime_grid_properties():
    grid = MultitimeGrid(np.array([1.0, 2.0]), (11, 5))
    assert grid.spacings == pytest.approx([0.1, 0.5])
    assert grid.axes[0][-1] == 1.0  # exact endpoint
    assert grid.axes[1][-1] == 2.0
    assert grid.terminal_index == (10, 4)
    np.testing.assert_allclose(grid.point((2, 3)), [0.2, 1.5])
    with pytest.raises(ValueError):
        MultitimeGrid(np.array([1.0]), (1,))


def test_backward_order_respects_product_order():
    grid = MultitimeGrid(np.array([1.0, 1.0]), (4, 3))
    order = grid.backward_order()
    assert order[0] == (3, 2)
    seen = {}
    for rank, idx in enumerate(order):
        seen[idx] = rank
    for idx in order:
        for axis in range(2):
            nbr = list(idx)
            nbr[axis] += 1
            if tuple(nbr) in seen:
                assert seen[tuple(nbr)] < seen[idx]
    # ties in coordinate sum break lexicographically
    sums = [sum(grid.point(i)) for i in order]
    assert all(sums[k] >= sums[k + 1] - 1e-12 for k in range(len(sums) - 1))
