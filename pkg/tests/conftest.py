import numpy as np
import pytest

from lambda_soliton import SystemParams


@pytest.fixture
def sys_params() -> SystemParams:
    return SystemParams(mu=2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
