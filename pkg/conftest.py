import numpy as np
import pytest

from saddleqr.saddle import SaddleBlocks


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_blocks():
    """A = 2 I, B = e1, C = [1]; M = [[2, 0, 1], [0, 2, 0], [1, 0, -1]], det(M) = -6."""
    return SaddleBlocks(
        np.array([[2.0, 0.0], [0.0, 2.0]]),
        np.array([[1.0], [0.0]]),
        np.array([[1.0]]),
    )


@pytest.fixture
def singular_blocks():
    """M = diag(1, 1, 0)."""
    return SaddleBlocks(np.eye(2), np.zeros((2, 1)), np.zeros((1, 1)))
