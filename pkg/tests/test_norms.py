import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varbesov.exponents import bump_field, constant_field
from varbesov.grid import DomainError, DyadicCube, Grid, GridFunction, indicator
from varbesov.norms import (
    BracketError,
    luxemburg_norm,
    mixed_modular,
    mixed_norm,
    modular,
    tilde_norm,
    unit_ball_check,
)
from varbesov.scalar import scalar_luxemburg, scalar_mixed_norm, scalar_modular

G = Grid(1, 3, 7)
MID = G.side / 2.0


def vfield(c0=1.4, c1=1.1, x0=2.0, w=1.5, role="integrability"):
    return bump_field(G, c0, c1, x0, w, role)


def rand_f(rng, scale=1.0):
    return GridFunction(scale * (rng.normal(size=G.shape)
                                 + 1j * rng.normal(size=G.shape)), G)


# -- modular ----------------------------------------------------------------

def test_modular_indicator_cubes():
    p3 = constant_field(G, 3.0)
    chi = indicator(DyadicCube(0, (0,)), G)
    assert modular(chi, p3) == pytest.approx(1.0, rel=1e-14)
    assert modular(2.0 * chi, p3) == pytest.approx(8.0, rel=1e-14)


def test_modular_matches_direct_summation(rng):
    p = vfield()
    f = rand_f(rng)
    direct = float(np.sum(np.abs(f.values) ** p.samples) * G.delta)
    assert modular(f, p) == pytest.approx(direct, rel=1e-13)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.1, max_value=4.0))
def test_modular_monotone_in_f(scale):
    rng = np.random.default_rng(5)
    p = vfield()
    f = rand_f(rng)
    g = GridFunction(f.values * (1.0 + scale), G)
    assert modular(f, p) <= modular(g, p)


# -- Luxemburg norm ----------------------------------------------------------

def test_luxemburg_closed_form_constant_p():
    for p0 in (1.0, 2.0, 3.0, 10.0):
        for v, vol in ((2, 0.25), (0, 1.0), (-2, 4.0)):
            chi = indicator(DyadicCube(v, (0,)), G)
            r = luxemburg_norm(chi, constant_field(G, p0), tol=1e-12)
            assert r.value == pytest.approx(vol ** (1.0 / p0), rel=1e-9)


def test_luxemburg_zero_function():
    r = luxemburg_norm(GridFunction(np.zeros(G.shape), G), vfield())
    assert r.value == 0.0 and r.bracketing == (0.0, 0.0)


def test_luxemburg_matches_lambda_scan(rng):
    # independent oracle: monotone scan over a lambda grid with step 1e-6
    p = vfield()
    f = rand_f(rng, scale=0.5)
    res = luxemburg_norm(f, p, tol=1e-10)
    lam_grid = np.arange(max(res.value - 5e-5, 1e-9), res.value + 5e-5, 1e-6)
    la = np.abs(f.values)
    mods = np.array([np.sum(la ** p.samples / lam ** p.samples) * G.delta
                     for lam in lam_grid])
    crossing = lam_grid[np.searchsorted(-mods, -1.0)]
    assert abs(res.value - crossing) <= 2e-6


def test_luxemburg_norm_result_invariants(rng):
    res = luxemburg_norm(rand_f(rng), vfield(), tol=1e-10)
    lo, hi = res.bracketing
    assert lo <= res.value <= hi
    assert hi - lo <= res.tolerance * max(1.0, res.value)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3))
def test_luxemburg_homogeneous(c):
    rng = np.random.default_rng(9)
    p = vfield()
    f = rand_f(rng)
    base = luxemburg_norm(f, p, tol=1e-11).value
    scaled = luxemburg_norm(GridFunction(c * f.values, G), p, tol=1e-11).value
    assert scaled == pytest.approx(c * base, rel=1e-9)


def test_luxemburg_monotone(rng):
    p = vfield()
    f = rand_f(rng)
    g = GridFunction(np.abs(f.values) + 0.3, G)
    tol = 1e-10
    assert luxemburg_norm(f, p, tol).value <= \
        luxemburg_norm(g, p, tol).value + tol


def test_bracket_overflow_error():
    tiny = GridFunction(np.full(G.shape, 1e-300), G)
    with pytest.raises(BracketError):
        luxemburg_norm(tiny, constant_field(G, 2.0))


# -- unit ball ---------------------------------------------------------------

def test_unit_ball_boundary_cases():
    p2 = constant_field(G, 2.0)
    chi = indicator(DyadicCube(0, (0,)), G)
    assert unit_ball_check(chi, p2) == (True, True)
    assert unit_ball_check(2.0 * chi, p2) == (False, False)


def test_unit_ball_random_agreement(rng):
    p = vfield()
    agree = 0
    total = 0
    for _ in range(200):
        f = rand_f(rng, scale=float(rng.uniform(0.05, 3.0)))
        rho = modular(f, p)
        if abs(rho - 1.0) < 1e-7:
            continue
        total += 1
        a, b = unit_ball_check(f, p)
        agree += a == b
    assert agree == total


# -- mixed modular / norm ----------------------------------------------------

def test_mixed_modular_single_level_q1(rng):
    p = vfield()
    q1 = constant_field(G, 1.0, "summability")
    f = rand_f(rng)
    mm = mixed_modular([f], p, q1)
    assert mm == pytest.approx(luxemburg_norm(f, p, tol=1e-12).value, rel=1e-9)


def test_mixed_modular_zero_and_empty():
    zero = GridFunction(np.zeros(G.shape), G)
    p, q = vfield(), vfield(role="summability")
    assert mixed_modular([], p, q) == 0.0
    assert mixed_modular([zero, zero], p, q) == 0.0


def test_mixed_modular_dual_route(rng):
    p = vfield()
    q = bump_field(G, 0.9, 1.6, 5.0, 2.0, "summability")
    fs = [rand_f(rng, scale=s) for s in (1.0, 0.4, 0.1)]
    a = mixed_modular(fs, p, q, route="bisect")
    b = mixed_modular(fs, p, q, route="direct")
    assert a == pytest.approx(b, rel=1e-8)


def test_mixed_norm_collapse_p_equals_q(rng):
    fs = [rand_f(rng) for _ in range(4)]
    p0 = 2.5
    pf = constant_field(G, p0)
    qf = constant_field(G, p0, "summability")
    got = mixed_norm(fs, pf, qf, tol=1e-11).value
    expect = (sum(scalar_luxemburg(f, p0) ** p0 for f in fs)) ** (1.0 / p0)
    assert got == pytest.approx(expect, rel=1e-9)


def test_mixed_norm_single_entry(rng):
    p = vfield()
    q = vfield(role="summability")
    f = rand_f(rng)
    zero = GridFunction(np.zeros(G.shape), G)
    got = mixed_norm([f, zero, zero], p, q, tol=1e-11).value
    assert got == pytest.approx(luxemburg_norm(f, p, tol=1e-12).value,
                                rel=1e-9)


def test_mixed_norm_constant_oracle(rng):
    fs = [rand_f(rng) for _ in range(5)]
    for p0, q0 in ((1.0, 2.0), (3.0, 0.8), (2.0, 5.0)):
        got = mixed_norm(fs, constant_field(G, p0),
                         constant_field(G, q0, "summability"), tol=1e-11)
        assert got.value == pytest.approx(scalar_mixed_norm(fs, p0, q0),
                                          rel=1e-8)


def test_mixed_norm_nested_bisection_oracle(rng):
    # independent slow route: outer bisection over mu, inner over lambda
    gs = Grid(1, 1, 4)
    p = bump_field(gs, 1.3, 0.8, 1.0, 0.7)
    q = bump_field(gs, 0.9, 0.8, 0.5, 0.6, "summability")
    fs = [GridFunction(rng.normal(size=gs.shape)
                       + 1j * rng.normal(size=gs.shape), gs)
          for _ in range(3)]

    def semimod(mu):
        total = 0.0
        for f in fs:
            a = np.abs(f.values) / mu
            lo, hi = 1e-12, 1e12
            for _ in range(100):
                mid = np.sqrt(lo * hi)
                if np.sum(a ** p.samples * mid ** (-p.samples / q.samples)) \
                        * gs.delta > 1.0:
                    lo = mid
                else:
                    hi = mid
            total += np.sqrt(lo * hi)
        return total

    lo, hi = 1e-9, 1e9
    for _ in range(100):
        mid = np.sqrt(lo * hi)
        if semimod(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    oracle = np.sqrt(lo * hi)
    got = mixed_norm(fs, p, q, tol=1e-11).value
    assert got == pytest.approx(oracle, rel=1e-7)


def test_mixed_norm_inf_sentinel_branch(rng):
    from varbesov.exponents import P_CAP, ExponentField
    pinf = ExponentField(np.full(G.shape, P_CAP), "integrability", G)
    q = constant_field(G, 2.0, "summability")
    fs = [rand_f(rng) for _ in range(3)]
    got = mixed_norm(fs, pinf, q, tol=1e-11).value
    # l^2(L^inf) for constant q: (sum_v ||f_v||_inf^2)^(1/2)
    expect = np.sqrt(sum(np.max(np.abs(f.values)) ** 2 for f in fs))
    assert got == pytest.approx(expect, rel=1e-8)


# -- tilde norm ---------------------------------------------------------------

def test_tilde_norm_zero_and_tau_zero(rng):
    p = vfield()
    tau0 = constant_field(G, 0.0, "tau")
    zero = GridFunction(np.zeros(G.shape), G)
    assert tilde_norm(zero, p, tau0).value == 0.0
    f = rand_f(rng)
    full = luxemburg_norm(f, p, tol=1e-12).value
    got = tilde_norm(f, p, tau0)
    # with tau = 0 the whole-domain cube gives the plain norm; smaller cubes
    # only decrease it
    assert got.value <= full * (1.0 + 1e-9)
    biggest = luxemburg_norm(
        GridFunction(f.values, G), p, tol=1e-12).value
    assert got.value >= biggest * (1.0 - 1e-9) or got.value <= full


def test_tilde_norm_matches_cube_enumeration(rng):
    # constant exponents: enumerate cubes, closed-form restricted norms
    p0, t0 = 2.0, 0.3
    p = constant_field(G, p0)
    tau = constant_field(G, t0, "tau")
    f = rand_f(rng)
    best = 0.0
    for w in range(-G.jmax, 1):
        blocks = G.block_partition(np.abs(f.values), w)
        volP = 2.0 ** (-w)
        vals = (np.sum(blocks ** p0, axis=1) * G.delta) ** (1.0 / p0) \
            / volP ** t0
        best = max(best, float(np.max(vals)))
    got = tilde_norm(f, p, tau)
    assert got.value == pytest.approx(best, rel=1e-9)


def test_duality_product_constant_p():
    from varbesov.exponents import conjugate_exponent
    for p0 in (1.25, 2.0, 4.0):
        p = constant_field(G, p0)
        pc = conjugate_exponent(p)
        for v in (-2, 0, 2):
            chi = indicator(DyadicCube(v, (0,)), G)
            vol = 2.0 ** (-v)
            prod = luxemburg_norm(chi, p, 1e-12).value \
                * luxemburg_norm(chi, pc, 1e-12).value
            assert prod == pytest.approx(vol, rel=1e-9)
