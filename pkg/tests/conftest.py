import numpy as np
import pytest

from renormlab import cascade, renorm1d, renorm_nd


@pytest.fixture(scope="session")
def phi40():
    return renorm1d.solve_fixed_point(degree=40)


@pytest.fixture(scope="session")
def phi20():
    return renorm1d.solve_fixed_point(degree=20)


@pytest.fixture(scope="session")
def logistic():
    return cascade.logistic_family()


@pytest.fixture(scope="session")
def henon():
    return cascade.henon_family()


@pytest.fixture(scope="session")
def logistic_cascade10(logistic):
    return cascade.run_cascade(logistic, 10)


@pytest.fixture(scope="session")
def logistic_cascade12(logistic):
    return cascade.run_cascade(logistic, 12)


@pytest.fixture(scope="session")
def henon_cascade7(henon):
    return cascade.run_cascade(henon, 7)


@pytest.fixture(scope="session")
def henon_cascade9(henon):
    return cascade.run_cascade(henon, 9)


@pytest.fixture(scope="session")
def std_map(phi20):
    return renorm_nd.standard_fct_map(2, phi20.phi0)


@pytest.fixture(scope="session")
def std_disk(std_map):
    found = renorm_nd.search_renorm_disk(std_map, start=np.array([0.3, 0.5]))
    assert found.found
    return found
