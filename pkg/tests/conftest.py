import numpy as np
import pytest

import levytaxis as lt


@pytest.fixture
def unit_circle_grid():
    """n=64 grid on [0, 2*pi): integer wavenumbers, exact trig sampling."""
    return lt.make_grid(64, 2.0 * np.pi)


@pytest.fixture
def box_grid():
    """A box large enough for decaying bumps."""
    return lt.make_grid(1024, 100.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def smooth_random_field(grid, rng, modes=12, amplitude=1.0):
    """Band-limited random real field (shared helper, not a fixture)."""
    values = np.zeros(grid.n)
    base = 2.0 * np.pi / grid.length
    amps = rng.standard_normal(modes)
    phases = rng.uniform(0, 2 * np.pi, modes)
    for m in range(1, modes + 1):
        values += amps[m - 1] * np.cos(base * m * grid.x + phases[m - 1])
    return lt.RealField(amplitude * values, grid)
