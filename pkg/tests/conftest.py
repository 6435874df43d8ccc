"""
Shared fixtures: worked-example instances, test settings, seeded generators
"""

import numpy as np
import pytest

from bincompletion.cli import configure_logging
from bincompletion.config import TestingConfig
from bincompletion.models import ProblemKind, SolverConfig
from oracles import make_instance


@pytest.fixture(autouse=True, scope="session")
def structured_logging():
    configure_logging(TestingConfig(log_level="WARNING"))


@pytest.fixture
def settings():
    return TestingConfig()


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))


@pytest.fixture
def intro_instance():
    """Six items that pack into two bins of 100."""
    return make_instance(ProblemKind.BINPACKING, [100], [6, 12, 15, 40, 43, 82])


@pytest.fixture
def seven_item_instance():
    return make_instance(ProblemKind.BINPACKING, [100], [83, 42, 41, 40, 12, 11, 5])


@pytest.fixture
def nogood_instance():
    return make_instance(ProblemKind.BINPACKING, [20], [10, 9, 8, 7, 7, 3, 3, 2, 2])


@pytest.fixture
def covering_instance():
    return make_instance(ProblemKind.BINCOVERING, [100], [60, 50, 45, 10])


@pytest.fixture
def mkp_instance():
    return make_instance(ProblemKind.MKP, [7, 5], [3, 4, 5], [4, 5, 6])


@pytest.fixture
def mccp_instance():
    return make_instance(ProblemKind.MCCP, [5, 5], [3, 3, 4, 4], [3, 3, 4, 4])


@pytest.fixture
def generation_order():
    return SolverConfig(value_ordering="generation-order", time_limit=60)
