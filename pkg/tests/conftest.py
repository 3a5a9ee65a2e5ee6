import numpy as np
import pytest

from otmix import EmbeddingSequence


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def eye3():
    return EmbeddingSequence(np.eye(3))
