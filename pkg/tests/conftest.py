import numpy as np
import pytest

from src.circle_core import FourierSeries
from src.theodorsen_solver import solve_boundary_correspondence
from src.types import FunctionSpec, SolverParams

COS = FunctionSpec(kind="trig_poly", params={"terms": [[1, 1.0, 0.0]]})
HALF_COS = FunctionSpec(kind="trig_poly", params={"terms": [[1, 0.5, 0.0]]})
COS_SIN3 = FunctionSpec(kind="trig_poly", params={"terms": [[1, 1.0, 0.0], [3, 0.0, 0.5]]})
WEIERSTRASS = FunctionSpec(kind="weierstrass_cos", params={"a": 0.5, "b": 3, "terms": 8})
ORACLE = FunctionSpec(kind="log_radius_of_map", params={"beta": 0.3})


def random_hermitian_series(rng: np.random.Generator, max_freq: int) -> FourierSeries:
    positive = rng.normal(size=max_freq) + 1j * rng.normal(size=max_freq)
    mapping = {0: complex(rng.normal())}
    for k, c in enumerate(positive, start=1):
        mapping[k] = c
        mapping[-k] = np.conj(c)
    return FourierSeries.from_mapping(mapping, max_freq=max_freq, real_flag=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def cos_outcome():
    return solve_boundary_correspondence(COS, SolverParams(n=2048))


@pytest.fixture(scope="session")
def oracle_outcome():
    return solve_boundary_correspondence(ORACLE, SolverParams(n=2048, tol=1e-10))


@pytest.fixture(scope="session")
def half_cos_outcome():
    return solve_boundary_correspondence(HALF_COS, SolverParams(n=256))


@pytest.fixture(scope="session")
def cos_outcomes_by_grid(cos_outcome):
    outcomes = {n: solve_boundary_correspondence(COS, SolverParams(n=n)) for n in (512, 1024)}
    outcomes[2048] = cos_outcome
    return outcomes
