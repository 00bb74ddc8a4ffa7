import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def lowrank_shapes_image(n=64):
    """Rank-3 smooth background with two piecewise-constant shapes, in [0,1]."""
    i = np.arange(n)
    bg = sum(
        np.outer(np.abs(np.sin((k + 1) * np.pi * i / n)), np.abs(np.cos((k + 1) * np.pi * i / n)))
        for k in range(3)
    ) / 3.0
    x = np.clip(bg, 0.0, 1.0)
    x[n // 4 : n // 2, n // 4 : 5 * n // 8] = 0.9
    x[5 * n // 8 : 7 * n // 8, n // 8 : 3 * n // 8] = 0.15
    return x


def three_region_phantom(n=128):
    """Piecewise-constant phantom with three intensity regions."""
    ph = np.full((n, n), 0.5)
    ph[n // 6 : n // 2 + 6, n // 8 : n // 2 - 4] = 0.1
    ph[n // 2 - 4 : 7 * n // 8, n // 2 + 6 : 9 * n // 10] = 0.9
    return ph
