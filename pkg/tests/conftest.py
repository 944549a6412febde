import pytest

from merge_lab.adversary import compute_tables
from merge_lab.game import GameSolver


@pytest.fixture(scope="session")
def solver():
    return GameSolver()


@pytest.fixture(scope="session")
def table12():
    return compute_tables(12, 12)
