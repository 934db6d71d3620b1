import pytest

from fractional_cycles.hypergraph import Hypergraph, gen_complete
from fractional_cycles.transitions import certify_and_resample, full_transition_system
from fractional_cycles.utils import fixture_path, load_instance


@pytest.fixture(scope="session")
def k5():
    return gen_complete(5, 2)


@pytest.fixture(scope="session")
def k7():
    return gen_complete(7, 2)


@pytest.fixture(scope="session")
def k8():
    return gen_complete(8, 2)


@pytest.fixture(scope="session")
def k12():
    return gen_complete(12, 2)


@pytest.fixture(scope="session")
def k3_7():
    return gen_complete(7, 3)


@pytest.fixture(scope="session")
def k5_full(k5):
    return full_transition_system(k5)


@pytest.fixture(scope="session")
def k8_system(k8):
    """A certified 4-regular system on K_8^2 at walk length 6."""
    T, report = certify_and_resample(k8, 4, base_ell=6, seed=11)
    return T


@pytest.fixture(scope="session")
def k12_system(k12):
    T, report = certify_and_resample(k12, 6, base_ell=5, seed=2024)
    return T


@pytest.fixture(scope="session")
def zero_cycle():
    return load_instance(fixture_path("zero_cycle.json"))


@pytest.fixture
def path3():
    """The 2-graph path 1-2-3 plus the isolated vertex 4."""
    return Hypergraph.from_edges(4, 2, [(1, 2), (2, 3)])
