import numpy as np
import pytest

from p2seq import (ClassificationError, Grid, GridFunction, ParameterError,
                   Parameters, ReferenceSolution, SolutionType, classify_type,
                   solve_reference)
from p2seq.reference import residual_floor


def test_parameter_validation():
    with pytest.raises(ParameterError):
        Parameters(sigma=0.0, tau=0.0, nu=1.0, mu=0.0)
    with pytest.raises(ParameterError):
        Parameters(sigma=0.5, tau=1.0, nu=1.0, mu=0.0)
    with pytest.raises(ParameterError):
        Parameters(sigma=0.5, tau=0.0, nu=-1.0, mu=0.0)
    with pytest.raises(ParameterError):
        Parameters(sigma=0.5, tau=0.0, nu=1.0, mu=float("nan"))


def test_mu_zero_gives_null_solution(grid):
    sol = solve_reference(Parameters(sigma=0.4, tau=0.1, nu=1.0, mu=0.0), grid)
    assert sol.solution_type is SolutionType.NULL
    assert sol.e0 == 0.0 and sol.e1 == 0.0
    assert np.all(sol.profile.values == 0.0)


def test_case1_endpoint_values(case1_reference):
    assert case1_reference.e0 == pytest.approx(4.180, abs=1e-3)
    assert case1_reference.e1 == pytest.approx(4.129, abs=1e-3)
    assert case1_reference.solution_type is SolutionType.TYPE_A


def test_case2_is_type_b(case2_reference):
    assert case2_reference.solution_type is SolutionType.TYPE_B
    assert np.all(case2_reference.profile.values < 0.0)
    assert np.all(np.diff(case2_reference.profile.values) >= 0.0)


def test_residual_norm_contract(case1_reference, case2_reference, grid):
    # The evaluated residual cannot beat the float64 backward-error level
    # of the stiff stencil rows; assert against that bound (or 1e-8 when
    # the bound is below it, as for the small-amplitude case).
    for sol in (case1_reference, case2_reference):
        amp = float(np.max(np.abs(sol.profile.values)))
        bound = max(1e-8, residual_floor(sol.params.nu, grid.spacing, amp))
        assert sol.residual_norm <= bound


def test_endpoint_derivatives_vanish(case1_reference, case2_reference):
    for sol in (case1_reference, case2_reference):
        assert abs(sol.profile.derivs[0]) <= 1e-9
        assert abs(sol.profile.derivs[-1]) <= 1e-9


def test_endpoint_ordering_for_nonzero_mu(case1_reference, case2_reference):
    small = Grid.uniform(513)
    rng = np.random.default_rng(17)
    sols = [case1_reference, case2_reference]
    for _ in range(3):
        p = Parameters(sigma=rng.uniform(0.2, 0.8), tau=rng.uniform(-0.5, 0.5),
                       nu=rng.uniform(0.2, 5.0),
                       mu=rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 1.5))
        sols.append(solve_reference(p, small))
    for sol in sols:
        assert sol.e0 ** 2 > sol.e1 ** 2


def test_odd_symmetry(grid):
    # (E, mu, tau) -> (-E, -mu, -tau) leaves the equation invariant
    small = Grid.uniform(513)
    rng = np.random.default_rng(23)
    for _ in range(3):
        sigma = rng.uniform(0.2, 0.8)
        tau = rng.uniform(-0.5, 0.5)
        nu = rng.uniform(0.3, 4.0)
        mu = rng.uniform(0.3, 1.8)
        plus = solve_reference(Parameters(sigma=sigma, tau=tau, nu=nu, mu=mu), small)
        minus = solve_reference(Parameters(sigma=sigma, tau=-tau, nu=nu, mu=-mu), small)
        assert np.max(np.abs(plus.profile.values + minus.profile.values)) <= 1e-8


def test_grid_refinement_stability(case1_params, case1_reference):
    fine = solve_reference(case1_params, Grid.uniform(4097))
    assert abs(fine.e0 - case1_reference.e0) <= 1e-9
    assert abs(fine.e1 - case1_reference.e1) <= 1e-9


def test_tolerance_validation(case1_params, grid):
    with pytest.raises(ParameterError):
        solve_reference(case1_params, grid, tol=1e-13)
    with pytest.raises(ParameterError):
        solve_reference((0.3, 0.0, 1.0, 0.5), grid)


def test_classify_type_cases(case1_reference, case2_reference):
    assert classify_type(case1_reference) is SolutionType.TYPE_A
    assert classify_type(case2_reference) is SolutionType.TYPE_B


def test_classify_type_rejects_mixed_profile(grid, case1_params):
    v = np.sin(2.0 * np.pi * grid.nodes) + 0.1
    d = 2.0 * np.pi * np.cos(2.0 * np.pi * grid.nodes)
    fake = ReferenceSolution(
        params=case1_params,
        profile=GridFunction(grid=grid, values=v, derivs=d),
        e0=float(v[0]), e1=float(v[-1]),
        solution_type=SolutionType.TYPE_A, residual_norm=0.0)
    with pytest.raises(ClassificationError):
        classify_type(fake)
