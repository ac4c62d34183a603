import pytest

from graphs.digraph import Digraph
from services.config_loader import load_settings


def cycle(n, offset=0):
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


@pytest.fixture(scope="session")
def settings():
    return load_settings()


@pytest.fixture(scope="session")
def seed(settings):
    return settings["corpus"]["seed"]


@pytest.fixture(scope="session")
def quick_count(settings):
    return settings["corpus"]["quick_count"]


@pytest.fixture
def triangle():
    return Digraph(3, cycle(3))


@pytest.fixture
def two_cycle():
    return Digraph(2, [(0, 1), (1, 0)])


@pytest.fixture
def two_triangles():
    return Digraph(6, cycle(3) + cycle(3, offset=3))


@pytest.fixture
def path_dag():
    return Digraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def complete4():
    return Digraph(4, [(a, b) for a in range(4) for b in range(4) if a != b])
