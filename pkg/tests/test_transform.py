import numpy as np
import pytest

from varbesov.grid import DomainError, Grid, GridFunction
from varbesov.sequences import SequenceCoeffs
from varbesov.transform import (
    analyze,
    annulus_profile,
    band_project,
    build_pair,
    calderon_residual,
    lowpass_profile,
    synthesize,
)

from conftest import band_limited


def test_profile_supports_and_plateaus():
    r = np.array([0.0, 0.4, 0.55, 0.6, 1.0, 5.0 / 3.0, 1.95, 2.1])
    phi = annulus_profile(r)
    assert phi[1] == 0.0          # |xi| = 0.4
    assert phi[-1] == 0.0         # |xi| = 2.1
    assert phi[3] == 1.0 and phi[5] == 1.0
    Phi = lowpass_profile(r)
    assert Phi[4] == 1.0          # |xi| = 1.0 on the plateau
    assert Phi[0] == 1.0
    assert Phi[-1] == 0.0


def test_assumption_lower_bounds_on_lattice(grid1, pair1):
    r = grid1.freq_radius()
    low = pair1.band_mult[0]
    assert np.all(low[r <= 5.0 / 3.0] >= pair1.lower_bound_c - 1e-15)
    assert np.all(low[r > 1.98] == 0.0)
    band1 = pair1.band_mult[1]
    ann = (r >= 2.0 * 3.0 / 5.0) & (r <= 2.0 * 5.0 / 3.0)
    assert np.all(band1[ann] >= pair1.lower_bound_c - 1e-15)
    outside = (r < 2.0 * 0.55) | (r > 2.0 * 1.95)
    assert np.all(band1[outside] == 0.0)


def test_calderon_residual_below_tolerance(pair1):
    assert calderon_residual(pair1) <= 1e-12


def test_build_pair_needs_bands():
    with pytest.raises(DomainError):
        build_pair(Grid(1, 1, 2))


def test_band_project_constant(grid1, pair1):
    c = GridFunction(np.full(grid1.shape, 2.0 + 0j), grid1)
    b0 = band_project(c, pair1, 0)
    assert np.max(np.abs(b0.values - 2.0)) < 1e-13
    for v in (1, 3):
        bv = band_project(c, pair1, v)
        assert np.max(np.abs(bv.values)) < 1e-13


def test_band_project_disjoint_bands(grid1, pair1, rng):
    # spectrum concentrated on the plateau annulus of band 3
    r = grid1.freq_radius()
    v0 = 3
    mask = (r >= 0.7 * 2.0 ** v0) & (r <= 1.5 * 2.0 ** v0)
    f = GridFunction(np.fft.ifftn(mask * (1.0 + 0j)), grid1)
    for v in range(pair1.v_max + 1):
        out = band_project(f, pair1, v)
        if abs(v - v0) >= 2:
            assert np.max(np.abs(out.values)) < 1e-13, v


def test_band_range_checked(grid1, pair1):
    f = GridFunction(np.zeros(grid1.shape), grid1)
    with pytest.raises(DomainError):
        band_project(f, pair1, pair1.v_max + 1)
    with pytest.raises(DomainError):
        band_project(f, pair1, -1)


def test_analyze_zero(grid1, pair1):
    co = analyze(GridFunction(np.zeros(grid1.shape), grid1), pair1)
    assert all(not np.any(arr) for arr in co.entries.values())


def test_analyze_matches_inner_product_oracle(grid1, pair1, rng):
    # naive quadrature inner products against the sampled analysis kernels
    f = band_limited(grid1, rng)
    co = analyze(f, pair1)
    x = grid1.axis_coords()
    for v in (0, 2, 4):
        kern = np.fft.ifft(pair1.band_mult[v]) / grid1.delta  # spatial kernel
        stride = grid1.samples_per_axis(v)
        for k in (0, 3):
            shift = np.roll(kern[::-1], k * stride + 1)  # kern(x_m - x)
            coeff = 2.0 ** (-v / 2.0) * np.sum(f.values * shift) * grid1.delta
            assert co.entries[v][k] == pytest.approx(coeff, rel=1e-10, abs=1e-12)


def test_analyze_band_disjoint_coefficients(grid1, pair1):
    # a synthesis element of band 3 has no coefficients two bands away
    lam = SequenceCoeffs({3: np.eye(1, 64, 20).ravel().astype(complex)}, grid1)
    f = synthesize(lam, pair1)
    co = analyze(f, pair1)
    for v in co.levels():
        if abs(v - 3) >= 2:
            assert np.max(np.abs(co.entries[v])) < 1e-12


def test_synthesize_zero_and_single(grid1, pair1):
    zero = SequenceCoeffs({}, grid1)
    assert not np.any(synthesize(zero, pair1).values)
    v, m = 3, 10
    lam = SequenceCoeffs({v: np.eye(1, 64, m).ravel().astype(complex)}, grid1)
    out = synthesize(lam, pair1).values
    # the sampled synthesis element directly: 2^(-v/2) psi_v(x - 2^-v m)
    x0 = 2.0 ** (-v) * m
    xi = 2.0 * np.pi * np.fft.fftfreq(grid1.points_per_axis, d=grid1.spacing)
    kern = np.fft.ifft(pair1.dual_mult[v] * np.exp(-1j * xi * x0)) / grid1.delta
    expect = 2.0 ** (-v / 2.0) * kern
    assert np.max(np.abs(out - expect)) < 1e-12


def test_reconstruction_identity(grid1, pair1, rng):
    for _ in range(5):
        f = band_limited(grid1, rng)
        back = synthesize(analyze(f, pair1), pair1)
        assert (back - f).l2_norm() / f.l2_norm() <= 1e-8


def test_reconstruction_2d():
    g = Grid(2, 1, 4)
    pair = build_pair(g)
    assert calderon_residual(pair) <= 1e-12
    rng = np.random.default_rng(3)
    f = band_limited(g, rng)
    back = synthesize(analyze(f, pair), pair)
    assert (back - f).l2_norm() / f.l2_norm() <= 1e-8


def test_shifted_analysis_multipliers(grid1, pair1):
    # negative levels sample the same profiles at coarser scale
    m = pair1.analysis_mult(-1)
    r = grid1.freq_radius()
    assert np.all(m[r > 2.0 * 1.95 / 2.0] == 0.0)
    low = pair1.analysis_mult(-2, lowpass=True)
    assert low[0] == 1.0
