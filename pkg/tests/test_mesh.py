import numpy as np
import pytest

from p2seq import (Grid, GridFunction, GridMismatchError, airy_quads,
                   cumulative_integral, max_abs_combined, scaled_basis)


def test_grid_validation():
    with pytest.raises(GridMismatchError):
        Grid.uniform(256)          # even
    with pytest.raises(GridMismatchError):
        Grid.uniform(255)          # too small
    g = Grid.uniform(257)
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0
    assert np.sum(g.weights) == pytest.approx(1.0, rel=1e-14)


def test_gridfunction_validation(grid):
    n = grid.size
    with pytest.raises(GridMismatchError):
        GridFunction(grid=grid, values=np.zeros(n - 1), derivs=np.zeros(n))
    bad = np.zeros(n)
    bad[3] = np.nan
    with pytest.raises(GridMismatchError):
        GridFunction(grid=grid, values=bad, derivs=np.zeros(n))


def test_cumulative_integral_constant(grid):
    f = np.ones(grid.size)
    F = cumulative_integral(f, grid)
    assert np.array_equal(F, grid.nodes) or np.max(np.abs(F - grid.nodes)) < 1e-15


def test_cumulative_integral_linear(grid):
    F = cumulative_integral(grid.nodes, grid)
    assert abs(F[-1] - 0.5) <= 1e-12
    assert np.max(np.abs(F - grid.nodes ** 2 / 2.0)) <= 1e-14


def test_cumulative_integral_size_mismatch(grid):
    with pytest.raises(GridMismatchError):
        cumulative_integral(np.ones(grid.size + 1), grid)


def test_cumulative_integral_airy_product_vs_trapezoid(grid, case1_params):
    basis = scaled_basis(case1_params)
    f = airy_quads(basis.s_of_x(grid.nodes))[0] ** 2
    F = cumulative_integral(f, grid)

    panels_per_cell = 500                      # one million panels overall
    n_fine = (grid.size - 1) * panels_per_cell + 1
    xf = np.linspace(0.0, 1.0, n_fine)
    ff = airy_quads(basis.s_of_x(xf))[0] ** 2
    hf = 1.0 / (n_fine - 1)
    running = np.concatenate(([0.0], np.cumsum((ff[1:] + ff[:-1]) * hf / 2.0)))
    oracle = running[::panels_per_cell]
    assert np.max(np.abs(F - oracle)) <= 1e-10


def test_cumulative_integral_linearity(grid):
    rng = np.random.default_rng(5)
    f = rng.standard_normal(grid.size)
    g = rng.standard_normal(grid.size)
    a, b = 1.7, -0.3
    lhs = cumulative_integral(a * f + b * g, grid)
    rhs = a * cumulative_integral(f, grid) + b * cumulative_integral(g, grid)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13


def test_cumulative_integral_fourth_order():
    f = lambda x: np.sin(6.0 * x) + np.exp(x)
    exact = lambda x: (1.0 - np.cos(6.0 * x)) / 6.0 + np.exp(x) - 1.0
    errs = []
    for n in (513, 1025):
        g = Grid.uniform(n)
        F = cumulative_integral(f(g.nodes), g)
        errs.append(np.max(np.abs(F - exact(g.nodes))))
    assert errs[0] / errs[1] >= 12.0


def test_max_abs_combined(grid):
    v = np.sin(3.0 * grid.nodes)
    d = 3.0 * np.cos(3.0 * grid.nodes)
    f = GridFunction(grid=grid, values=v, derivs=d)
    assert max_abs_combined(f, f) == 0.0
    g = GridFunction(grid=grid, values=v + 0.25, derivs=d)
    assert max_abs_combined(f, g) == pytest.approx(0.25, rel=1e-14)


def test_max_abs_combined_grid_mismatch(grid):
    other = Grid.uniform(257)
    f = GridFunction(grid=grid, values=np.zeros(grid.size), derivs=np.zeros(grid.size))
    g = GridFunction(grid=other, values=np.zeros(257), derivs=np.zeros(257))
    with pytest.raises(GridMismatchError):
        max_abs_combined(f, g)
