import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diskmag.config import DEFAULT_CONFIG
from diskmag.crossings import crossings_range
from diskmag.degennes import compute_constants
from diskmag.derivatives import lambda_prime


@pytest.fixture(scope="session")
def config():
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def constants(config):
    return compute_constants(config)


@pytest.fixture(scope="session")
def crossings400(config):
    return crossings_range(400, config)


@pytest.fixture(scope="session")
def envelope_derivatives(config, crossings400):
    """(left, right) = (lambda'(n, beta_n), lambda'(n+1, beta_n)) for all n."""
    left, right = {}, {}
    for point in crossings400:
        left[point.n] = lambda_prime(point.n, point.beta_n, config,
                                     cross_check=False).dlambda
        right[point.n] = lambda_prime(point.n + 1, point.beta_n, config,
                                      cross_check=False).dlambda
    return left, right
