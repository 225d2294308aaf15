import numpy as np
import pytest

from circsym import ComplexSample, pairwise_summaries


def random_complex(rng, n, d, scale=1.0):
    """A complex (n, d) matrix with mildly noncircular components."""
    re = rng.standard_normal((n, d))
    im = 0.7 * rng.standard_normal((n, d)) + 0.2 * re
    return scale * (re + 1j * im)


def random_sample(rng, n, d, scale=1.0) -> ComplexSample:
    return ComplexSample.from_complex(random_complex(rng, n, d, scale))


@pytest.fixture
def rng():
    return np.random.default_rng(20250815)


@pytest.fixture
def small_sample(rng):
    return random_sample(rng, 12, 2)


@pytest.fixture
def small_summaries(small_sample):
    return pairwise_summaries(small_sample)
