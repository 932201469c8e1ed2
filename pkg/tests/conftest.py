import numpy as np
import pytest

from threshnet import ParetoParams


@pytest.fixture
def pareto3():
    return ParetoParams(a=3.0, w0=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
