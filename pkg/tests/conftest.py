import numpy as np
import pytest

from bbmlab.grids import FrequencyGrid, SpectralFunction


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def torus():
    return FrequencyGrid("torus", 32)


@pytest.fixture
def line():
    return FrequencyGrid("line", 16, 0.125)


@pytest.fixture
def random_spectral():
    """Factory for random band-limited functions on a grid."""

    def make(rng, grid, band, hermitian=False, min_mag=0.0):
        m = int(np.floor(band / grid.spacing))
        idx = np.arange(-m, m + 1, dtype=np.int64)
        mag = rng.uniform(min_mag, 1.0, idx.size)
        pha = rng.uniform(0.0, 2.0 * np.pi, idx.size)
        vals = mag * np.exp(1j * pha)
        if hermitian:
            vals[idx < 0] = np.conj(vals[idx > 0][::-1])
            vals[idx == 0] = mag[idx == 0]
        return SpectralFunction(grid, idx, vals)

    return make
