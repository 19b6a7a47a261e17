import numpy as np
import pytest

from varbesov.corpus import build_corpus
from varbesov.exponents import bump_field, constant_field
from varbesov.grid import Grid, GridFunction
from varbesov.sequences import SpaceParams
from varbesov.transform import build_pair


@pytest.fixture(scope="session")
def grid1():
    return Grid(dim=1, jmax=3, jfine=7)


@pytest.fixture(scope="session")
def grid2():
    return Grid(dim=2, jmax=1, jfine=4)


@pytest.fixture(scope="session")
def pair1(grid1):
    return build_pair(grid1)


@pytest.fixture(scope="session")
def corpus1(grid1):
    return build_corpus(grid1, seed=20240601, n_functions=9, n_sequences=12)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def const_space(grid1):
    def make(alpha, tau, p, q, window=None):
        return SpaceParams(
            constant_field(grid1, alpha, "smoothness"),
            constant_field(grid1, tau, "tau"),
            constant_field(grid1, p),
            constant_field(grid1, q, "summability"),
            window=window,
        )
    return make


@pytest.fixture(scope="session")
def var_space(grid1):
    mid = grid1.side / 2.0
    return SpaceParams(
        bump_field(grid1, 0.4, 0.5, mid, 1.5, "smoothness", decay_limit=0.4),
        bump_field(grid1, 0.35, 0.1, mid * 0.7, 2.0, "tau", decay_limit=0.35),
        bump_field(grid1, 2.0, 0.7, mid * 1.2, 1.2, decay_limit=2.0),
        bump_field(grid1, 1.2, 0.9, mid * 0.4, 1.8, "summability",
                   decay_limit=1.2),
    )


def band_limited(grid, rng, frac=0.9):
    spec = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    mask = grid.freq_radius() <= frac * 2.0 ** (grid.jfine - 1)
    return GridFunction(np.fft.ifftn(spec * mask), grid)
