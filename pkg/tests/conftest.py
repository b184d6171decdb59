import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density(rng, dim, rank=None, support=None):
    """Random mixed state on the first ``support`` levels of a ``dim`` basis."""
    support = dim if support is None else support
    rank = support if rank is None else rank
    g = rng.normal(size=(support, rank)) + 1j * rng.normal(size=(support, rank))
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:support, :support] = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
