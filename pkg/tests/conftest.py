import numpy as np
import pytest

from gibbstree import ModelParams


@pytest.fixture
def p33():
    """Reference point well below the (3,3) threshold of 0.25."""
    return ModelParams(q=3, k=3, theta=0.1)


@pytest.fixture
def p33_warm():
    """Reference point above the (3,3) threshold."""
    return ModelParams(q=3, k=3, theta=0.5)


def draw_regime_params(rng: np.random.Generator, k_max: int = 9) -> ModelParams:
    """One random parameter point inside the solver hypothesis."""
    k = int(rng.integers(3, k_max + 1))
    q = int(rng.integers(3, k + 1))
    theta = float(rng.uniform(0.01, 0.99))
    return ModelParams(q=q, k=k, theta=theta)


@pytest.fixture
def draw_regime():
    return draw_regime_params
