import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from p2seq import (Grid, Parameters, SeriesState, convert, convert_profile,
                   extend_series, solve_reference)

CASE1 = dict(sigma=1.0 / 3.0, tau=-0.2, nu=3.5, mu=2.0)
CASE2 = dict(sigma=1.0 / 3.0, tau=-0.2, nu=0.1, mu=-0.5)


@pytest.fixture(scope="session")
def grid():
    return Grid.uniform(2049)


@pytest.fixture(scope="session")
def case1_params():
    return Parameters(**CASE1)


@pytest.fixture(scope="session")
def case2_params():
    return Parameters(**CASE2)


@pytest.fixture(scope="session")
def case1_reference(case1_params, grid):
    return solve_reference(case1_params, grid)


@pytest.fixture(scope="session")
def case2_reference(case2_params, grid):
    return solve_reference(case2_params, grid)


@pytest.fixture(scope="session")
def case1_series(case1_params, grid):
    return extend_series(SeriesState(case1_params, grid), 60)


@pytest.fixture(scope="session")
def case2_series(case2_params, grid):
    return extend_series(SeriesState(case2_params, grid), 20)


@pytest.fixture(scope="session")
def case1_instance(case1_reference, case1_params):
    return convert(case1_reference.e0, case1_reference.e1, case1_params)


@pytest.fixture(scope="session")
def case2_instance(case2_reference, case2_params):
    return convert(case2_reference.e0, case2_reference.e1, case2_params)


@pytest.fixture(scope="session")
def case1_y(case1_reference, case1_instance):
    return convert_profile(case1_reference.profile, case1_instance)


@pytest.fixture(scope="session")
def case2_y(case2_reference, case2_instance):
    return convert_profile(case2_reference.profile, case2_instance)
