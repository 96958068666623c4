import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_invertible_homography(rng, scale=1.0):
    """Well-conditioned random 3x3 projective matrix."""
    while True:
        m = np.eye(3) + rng.normal(0.0, 0.3, (3, 3))
        m[2, :2] *= 0.01 * scale  # keep the perspective terms mild
        if abs(np.linalg.det(m)) > 1e-3:
            return m
