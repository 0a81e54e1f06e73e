import numpy as np
import pytest

from config import RunConfiguration
from fanoutils import THREADS_ENV

# Working grid of the closed-form oracles
NBAR_GRID = np.geomspace(1e-3, 1e3, 21)
DELTA_GRID = np.geomspace(1e-2, 1e2, 21)
GAMMA_D_GRID = [0.0, 1.0, 2.0, 5.0, 10.0]


@pytest.fixture(autouse=True)
def fresh_configuration(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    RunConfiguration.reset()
    yield
    RunConfiguration.reset()


@pytest.fixture
def rng():
    return np.random.default_rng(20190601)
