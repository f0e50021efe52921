import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def sample_ball(rng, n):
    """n Bloch vectors uniform in the closed unit ball."""
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.random((n, 1)) ** (1.0 / 3.0)


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
