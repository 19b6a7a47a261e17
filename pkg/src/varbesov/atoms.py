"""Smooth atoms on dyadic cubes: validation, atomization, decay checks.

An atom at cube Q(v, m) is supported in the concentric gamma-dilated cube,
has finite-difference derivative estimates bounded by 2^(v(|beta|+1/2)) up
to order K, and (for v >= 1) vanishing moments up to degree L.  Atomization
integrates a compactly supported C^K window against the dual band pieces
over each cube; the window's discrete moments are projected away per level
in the grid quadrature, so the produced atoms satisfy the moment condition
to solver precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BSpline

from .grid import DomainError, DyadicCube, Grid, GridFunction
from .sequences import SequenceCoeffs, SpaceParams
from .transform import TransformPair

__all__ = [
    "AtomSpec",
    "AtomWindow",
    "make_atom_window",
    "kl_requirements",
    "validate_atom",
    "atomize",
    "synthesize_atoms",
    "fj_decay_check",
]

DEFAULT_GAMMA = 1.5
FD_TOL = 0.05


@dataclass
class AtomSpec:
    """A candidate atom: location cube, orders, dilation factor, samples."""

    K: int
    L: int
    gamma: float
    cube: DyadicCube
    samples: GridFunction

    def __post_init__(self):
        if self.K < 0 or self.L < -1:
            raise DomainError("atom orders need K >= 0 and L >= -1")
        if not self.gamma > 1.0:
            raise DomainError("gamma must exceed 1")


def _multi_indices(max_total: int, dim: int):
    if max_total < 0:
        return []
    out = []
    for total in range(max_total + 1):
        if dim == 1:
            out.append((total,))
        else:
            out.extend((i, total - i) for i in range(total + 1))
    return out


def _bspline_bump(order_k: int):
    """C^K unit bump on [-1, 1] built from a cardinal B-spline."""
    m = order_k + 2
    base = BSpline.basis_element(np.arange(m + 1.0), extrapolate=False)

    def w1(t):
        t = np.asarray(t, dtype=float)
        u = (t + 1.0) * (m / 2.0)
        vals = base(u)
        return np.nan_to_num(vals, nan=0.0)

    return w1


@dataclass
class AtomWindow:
    """Compactly supported C^K window with per-level moment corrections.

    Moments up to degree L are removed by multiplying the base bump w by
    the monic degree-(L+1) polynomial that Gram-Schmidt orthogonalisation
    of the monomials produces in the w-weighted grid quadrature at that
    level (tensorised per axis in 2-D).  The product then has vanishing
    discrete moments of every multi-degree <= L, exactly in the grid's
    quadrature, while remaining C^K with the same support.
    """

    K: int
    L: int
    radius: float = 1.0
    _w1: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError("window radius must be positive")
        if self._w1 is None:
            self._w1 = _bspline_bump(self.K)

    def base_profile(self, axes) -> np.ndarray:
        out = 1.0
        for y in axes:
            out = out * self._w1(np.asarray(y) / self.radius)
        return out

    def _poly_coeffs(self, grid: Grid, v: int) -> np.ndarray:
        """Non-leading coefficients of the monic orthogonal polynomial.

        P(y) = y^(L+1) - sum_b c_b y^b is orthogonal to every degree <= L
        against the level-v sampled bump along one axis.
        """
        key = ("poly", grid, v)
        if key in self._cache:
            return self._cache[key]
        y = grid.periodic_delta(grid.axis_coords()) * 2.0 ** v
        w = self._w1(y / self.radius)
        deg = self.L + 1
        powers = np.stack([y ** b for b in range(deg + 1)])
        G = np.einsum("iz,jz->ij", powers[:deg] * w, powers[:deg])
        rhs = np.einsum("iz,z->i", powers[:deg] * w, powers[deg])
        try:
            c = np.linalg.solve(G, rhs)
        except np.linalg.LinAlgError as exc:
            raise DomainError(
                f"window cannot carry {self.L + 1} vanishing moments at "
                f"level {v}: too few samples under its support"
            ) from exc
        self._cache[key] = c
        return c

    def _axis_factor(self, y: np.ndarray, coeffs) -> np.ndarray:
        out = self._w1(np.asarray(y) / self.radius)
        if coeffs is not None:
            deg = self.L + 1
            poly = np.asarray(y) ** deg
            for b in range(deg):
                poly = poly - coeffs[b] * np.asarray(y) ** b
            out = out * poly
        return out

    def kernel(self, grid: Grid, v: int, corrected: bool = True) -> np.ndarray:
        """Grid samples of theta(2^v z) over periodic offsets z."""
        corrected = corrected and self.L >= 0
        key = ("kern", grid, v, corrected)
        if key in self._cache:
            return self._cache[key]
        axes = _kernel_axes(grid, v)
        coeffs = self._poly_coeffs(grid, v) if corrected else None
        vals = 1.0
        for y in axes:
            vals = vals * self._axis_factor(y, coeffs)
        self._cache[key] = vals
        return vals

    def c_theta(self, grid: Grid, levels) -> float:
        """max over |beta| <= K and the used levels of sup |D^beta theta|.

        Moment corrections apply from level 1 on, matching the kernels the
        atomization actually uses.
        """
        best = _profile_derivative_sup(self, None, grid.dim, self.K)
        for v in levels:
            if v < 1 or self.L < 0:
                continue
            c = self._poly_coeffs(grid, v)
            best = max(best, _profile_derivative_sup(self, c, grid.dim, self.K))
        return best


def _kernel_axes(grid: Grid, v: int):
    """Scaled periodic offsets y = 2^v * z per axis, broadcastable."""
    z = grid.periodic_delta(grid.axis_coords())
    y = (2.0 ** v) * z
    if grid.dim == 1:
        return (y,)
    return (y[:, None], y[None, :])


def _monomial(axes, gamma) -> np.ndarray:
    out = 1.0
    for y, g in zip(axes, gamma):
        if g:
            out = out * np.asarray(y) ** g
    return out + np.zeros(np.broadcast_shapes(*(np.shape(a) for a in axes)))


def _profile_derivative_sup(window: AtomWindow, poly_coeffs,
                            dim: int, K: int, step: float = 2.0 ** -8) -> float:
    """FD estimate of max_{|beta|<=K} sup |D^beta theta| on a fine lattice."""
    r = window.radius
    pad = 8 * step * r
    t = np.arange(-r - pad, r + pad, step * r)
    axes = (t,) if dim == 1 else (t[:, None], t[None, :])
    vals = 1.0
    for y in axes:
        vals = vals * window._axis_factor(y, poly_coeffs)
    h = step * r
    best = float(np.max(np.abs(vals)))
    for beta in _multi_indices(K, dim):
        if sum(beta) == 0:
            continue
        d = vals
        for ax, order in enumerate(beta):
            for _ in range(order):
                d = _central_diff(d, h, ax)
        best = max(best, float(np.max(np.abs(d))))
    return best


def _central_diff(a: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order central first derivative along an axis (periodic roll)."""
    f1 = np.roll(a, -1, axis=axis)
    f2 = np.roll(a, -2, axis=axis)
    b1 = np.roll(a, 1, axis=axis)
    b2 = np.roll(a, 2, axis=axis)
    return (-f2 + 8.0 * f1 - 8.0 * b1 + b2) / (12.0 * h)


def make_atom_window(K: int, L: int, radius: float = 1.0) -> AtomWindow:
    return AtomWindow(K=K, L=L, radius=radius)


def kl_requirements(sp: SpaceParams, n: int) -> tuple:
    """Smallest admissible derivative and moment orders for this space."""
    sp.tau_positive()
    a_plus = sp.alpha.sup_value
    a_minus = sp.alpha.inf_value
    t_plus = sp.tau.sup_value
    k_min = max(int(np.floor(a_plus + n * t_plus)) + 1, 0)
    ratio = sp.tau_p_min() / t_plus
    l_min = max(-1, int(np.floor(n * (1.0 / min(1.0, ratio) - 1.0) - a_minus)))
    return k_min, l_min


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _patch_mask(Q: DyadicCube, grid: Grid, gamma: float) -> np.ndarray:
    """Mask of the gamma-dilated concentric cube, periodic wrap included."""
    s = grid.samples_per_axis(Q.v)
    N = grid.points_per_axis
    half_extra = int(np.ceil((gamma - 1.0) / 2.0 * s))
    span = s + 2 * half_extra + 1
    axis_idx = []
    for mi in Q.m:
        if span >= N:
            axis_idx.append(np.arange(N))
        else:
            axis_idx.append(np.arange(mi * s - half_extra,
                                      mi * s - half_extra + span) % N)
    mask = np.zeros(grid.shape, dtype=bool)
    if grid.dim == 1:
        mask[axis_idx[0]] = True
    else:
        mask[np.ix_(axis_idx[0], axis_idx[1])] = True
    return mask


def validate_atom(a: AtomSpec, fd_tol: float = FD_TOL,
                  mom_tol: float = 1e-9) -> dict:
    """Check support, derivative bounds and vanishing moments of an atom.

    Moments are computed against cube-local scaled monomials
    (2^v (x - c_Q))^beta, which vanish if and only if the raw moments do.
    """
    grid = a.samples.grid
    Q = a.cube
    v = Q.v
    vals = a.samples.values
    scale = float(np.max(np.abs(vals))) if np.any(vals) else 0.0

    report = {"pass": True, "conditions": {}}

    if np.isfinite(a.gamma):
        mask = _patch_mask(Q, grid, a.gamma)
        outside = float(np.max(np.abs(vals[~mask]))) if np.any(~mask) else 0.0
        ok = outside <= 1e-12 * max(scale, 1.0)
        report["conditions"]["support"] = {"pass": ok, "worst": outside}
        report["pass"] &= ok

    h = grid.spacing
    worst_ratio = 0.0
    for beta in _multi_indices(a.K, grid.dim):
        d = vals
        for ax, order in enumerate(beta):
            for _ in range(order):
                d = _central_diff(d, h, ax)
        bound = 2.0 ** (v * (sum(beta) + 0.5))
        ratio = float(np.max(np.abs(d))) / bound
        worst_ratio = max(worst_ratio, ratio)
    ok = worst_ratio <= 1.0 + fd_tol
    report["conditions"]["derivatives"] = {"pass": ok, "worst": worst_ratio}
    report["pass"] &= ok

    if a.L >= 0 and v >= 1:
        axes = _local_axes(Q, grid)
        worst = 0.0
        for beta in _multi_indices(a.L, grid.dim):
            mono = _monomial(axes, beta)
            mom = abs(complex(np.sum(mono * vals) * grid.delta))
            worst = max(worst, mom)
        ok = worst <= mom_tol
        report["conditions"]["moments"] = {"pass": ok, "worst": worst}
        report["pass"] &= ok

    report["pass"] = bool(report["pass"])
    return report


def _local_axes(Q: DyadicCube, grid: Grid):
    """Scaled cube-local coordinates 2^v (x - c_Q), periodic, per axis."""
    s = 2.0 ** Q.v
    cs = grid.coords()
    out = []
    for ax in range(grid.dim):
        c = Q.center[ax]
        out.append(s * grid.periodic_delta(np.asarray(cs[ax]) - c))
    return tuple(out)


# ---------------------------------------------------------------------------
# atomization
# ---------------------------------------------------------------------------

def atomize(f: GridFunction, pair: TransformPair, window, K: int, L: int):
    """Decompose f into cube-located coefficients and atoms.

    Coefficients are the window's derivative constant times the cube
    supremum of the dual band piece; each atom integrates the level-scaled
    window against that piece over its own cube.  Passing window="dual"
    replaces the compact window by the exact synthesis kernel, which makes
    sum(lambda * atom) reproduce f to rounding but forfeits compact
    support of the atoms.
    """
    grid = f.grid
    if pair.grid != grid:
        raise DomainError("pair built on another grid")
    exact_dual = isinstance(window, str) and window == "dual"
    if not exact_dual:
        if not isinstance(window, AtomWindow):
            raise DomainError("window must be an AtomWindow or 'dual'")
        if window.K < K:
            raise DomainError("window smoothness below requested K")
        if L >= 0 and window.L < L:
            raise DomainError("window lacks the requested vanishing moments")

    spec = np.fft.fftn(f.values)
    levels = range(pair.v_max + 1)
    if exact_dual:
        c_theta = 1.0
    else:
        c_theta = window.c_theta(grid, [v for v in levels if v >= 1])
        if c_theta <= 0:
            raise DomainError("window has vanishing derivative constant")

    entries = {}
    atoms = []
    n = grid.dim
    for v in levels:
        g = np.fft.ifftn(spec * pair.dual_mult[v])
        blocks = grid.block_partition(np.abs(g), v)
        sup = blocks.max(axis=-1)
        lam = c_theta * sup
        entries[v] = lam.astype(complex)
        nz = np.nonzero(lam)[0]
        if nz.size == 0:
            continue
        if exact_dual:
            # synthesis kernel already carries its own scaling
            kern_hat = pair.band_mult[v]
            gamma_v = np.inf
            scale = 1.0
        else:
            kern = window.kernel(grid, v, corrected=(v >= 1))
            kern_hat = np.fft.fftn(kern)
            s = grid.samples_per_axis(v)
            gamma_v = 1.0 + 2.0 * np.ceil(window.radius * s) / s
            scale = 2.0 ** (v * n) * grid.delta
        for k in nz:
            Q = grid.cube_from_index(v, int(k))
            masked = np.zeros(grid.shape, dtype=complex)
            sl = Q.sample_slices(grid)
            masked[sl] = g[sl]
            conv = np.fft.ifftn(np.fft.fftn(masked) * kern_hat) * scale
            rho = conv / lam[k]
            if not exact_dual:
                rho = np.where(_patch_mask(Q, grid, gamma_v), rho, 0.0)
            atoms.append(AtomSpec(K=K, L=L, gamma=gamma_v, cube=Q,
                                  samples=GridFunction(rho, grid)))
    return SequenceCoeffs(entries=entries, grid=grid), atoms


def synthesize_atoms(lam: SequenceCoeffs, atoms) -> GridFunction:
    """Pointwise sum of coefficient-weighted atoms."""
    if not atoms:
        grid = lam.grid
        return GridFunction(np.zeros(grid.shape, dtype=complex), grid)
    grid = atoms[0].samples.grid
    keyed = {(a.cube.v, a.cube.m): a for a in atoms}
    nz_keys = {(Q.v, Q.m) for Q, _ in lam.nonzero()}
    if nz_keys != set(keyed.keys()):
        raise DomainError("coefficient and atom index sets do not match")
    out = np.zeros(grid.shape, dtype=complex)
    for Q, val in lam.nonzero():
        out += val * keyed[(Q.v, Q.m)].samples.values
    return GridFunction(out, grid)


def fj_decay_check(atom: AtomSpec, pair: TransformPair, M: float) -> float:
    """Empirical constant of the band-piece decay envelopes of an atom.

    For band level j the envelope is 2^((v-j)K + v n/2) (1 + 2^v d)^(-M)
    when v <= j and 2^((j-v)(L+n+1) + v n/2) (1 + 2^j d)^(-M) when v >= j,
    with d the periodic distance to the atom's cube corner.
    """
    grid = atom.samples.grid
    if not np.any(atom.samples.values):
        return 0.0
    v = atom.cube.v
    n = grid.dim
    d = grid.periodic_dist(np.asarray(atom.cube.x_corner))
    spec = np.fft.fftn(atom.samples.values)
    best = 0.0
    for j in range(pair.v_max + 1):
        u = np.abs(np.fft.ifftn(spec * pair.band_mult[j]))
        if v <= j:
            env = 2.0 ** ((v - j) * atom.K + v * n / 2.0) \
                * (1.0 + 2.0 ** v * d) ** (-M)
        else:
            env = 2.0 ** ((j - v) * (atom.L + n + 1) + v * n / 2.0) \
                * (1.0 + 2.0 ** j * d) ** (-M)
        best = max(best, float(np.max(u / env)))
    return best
