import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(rng, m):
    b = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return 0.5 * (b + b.conj().T)
