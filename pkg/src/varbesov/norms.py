"""Variable-exponent modulars, Luxemburg norms and mixed sequence norms.

The Luxemburg norm is the unique root of the strictly decreasing map
lambda -> modular(f / lambda); on a finite grid with bounded exponent the
root always exists for nonzero f.  The scalar entry points use the plain
doubling-bracket + bisection contract.  The cube-supremum norms need many
thousands of such roots, so they run on a vectorised solver that works in
log coordinates, where every modular is a convex decreasing sum of
exponentials and safeguarded Newton steps converge monotonically from the
left of the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponents import P_CAP, ExponentField
from .grid import DomainError, Grid, GridFunction, LN2

__all__ = [
    "NormResult",
    "BracketError",
    "modular",
    "luxemburg_norm",
    "unit_ball_check",
    "mixed_modular",
    "mixed_norm",
    "tilde_norm",
    "family_sup_norm",
    "indicator_norms",
]

NEG_INF = -np.inf

DEFAULT_RTOL = 1e-10
MAX_BISECT = 200
MAX_DOUBLINGS = 64


class BracketError(OverflowError):
    """Doubling search failed to straddle the unit modular level."""


@dataclass
class NormResult:
    """A computed quasi-norm value with its enclosing bracket."""

    value: float
    tolerance: float
    iterations: int
    bracketing: tuple
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.bracketing
        if not (lo - 1e-300 <= self.value <= hi + 1e-300):
            raise AssertionError("norm value escaped its bracket")


def _log_abs(values: np.ndarray) -> np.ndarray:
    a = np.abs(values)
    with np.errstate(divide="ignore"):
        return np.where(a > 0.0, np.log(np.where(a > 0.0, a, 1.0)), NEG_INF)


def _check_exponent(p: ExponentField, f: GridFunction) -> None:
    if p.grid != f.grid:
        raise DomainError("exponent and function live on different grids")
    if p.sup_value > P_CAP + 1e-9:
        raise DomainError(f"exponent exceeds the cap {P_CAP}")
    p.require_positive("integrability exponent")


# ---------------------------------------------------------------------------
# scalar modular / Luxemburg norm
# ---------------------------------------------------------------------------

def modular(f: GridFunction, p: ExponentField) -> float:
    """Quadrature of sum |f(x)|^p(x) over the torus.

    Power-domain evaluation keeps unit-height indicators exact, so the
    unit-ball equivalence has no artificial boundary fuzz.
    """
    _check_exponent(p, f)
    if not np.all(np.isfinite(f.values)):
        raise DomainError("modular of non-finite samples")
    with np.errstate(over="ignore"):
        t = np.power(np.abs(f.values), p.samples)
    return float(np.sum(t) * f.grid.delta)


def _modular_at_scale(abs_f: np.ndarray, p: np.ndarray, lam: float,
                      delta: float) -> float:
    with np.errstate(over="ignore"):
        t = np.power(abs_f / lam, p)
    return float(np.sum(t) * delta)


def luxemburg_norm(f: GridFunction, p: ExponentField,
                   tol: float = DEFAULT_RTOL) -> NormResult:
    """inf{lambda > 0 : modular(f/lambda) <= 1} by doubling then bisection."""
    _check_exponent(p, f)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    absf = np.abs(f.values)
    if not np.any(absf):
        return NormResult(0.0, tol, 0, (0.0, 0.0))
    delta = f.grid.delta
    ps = p.samples

    def rho(lam: float) -> float:
        return _modular_at_scale(absf, ps, lam, delta)

    lo = hi = 1.0
    r1 = rho(1.0)
    iters = 0
    if r1 > 1.0:
        for _ in range(MAX_DOUBLINGS):
            lo = hi
            hi *= 2.0
            iters += 1
            if rho(hi) <= 1.0:
                break
        else:
            raise BracketError("no upper bracket within 64 doublings")
    elif r1 < 1.0:
        for _ in range(MAX_DOUBLINGS):
            hi = lo
            lo /= 2.0
            iters += 1
            if rho(lo) > 1.0:
                break
        else:
            raise BracketError("no lower bracket within 64 doublings")
    else:
        return NormResult(1.0, tol, iters, (1.0, 1.0))

    for _ in range(MAX_BISECT):
        if hi - lo <= tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        iters += 1
        if rho(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    return NormResult(value, tol, iters, (lo, hi))


def unit_ball_check(f: GridFunction, p: ExponentField,
                    tol: float = DEFAULT_RTOL) -> tuple:
    """(norm <= 1, modular <= 1); the two agree away from the unit sphere."""
    nrm = luxemburg_norm(f, p, tol)
    rho = modular(f, p)
    return (nrm.value <= 1.0, rho <= 1.0)


# ---------------------------------------------------------------------------
# vectorised root solvers (log coordinates)
#
# A block modular has the form  T(b) = sum_e exp(e1_e - c1_e * b)  with
# c1_e > 0, so T is convex and strictly decreasing where finite.  Starting
# from b_lo = max_e(e1_e / c1_e) every term's exponent is <= 0 (no overflow)
# and T(b_lo) >= 1, and Newton iterates increase monotonically to the root.
# ---------------------------------------------------------------------------

def _logsumexp(e: np.ndarray, axis: int = -1) -> np.ndarray:
    m = np.max(e, axis=axis)
    safe_m = np.where(np.isfinite(m), m, 0.0)
    s = np.sum(np.exp(e - np.expand_dims(safe_m, axis)), axis=axis)
    with np.errstate(divide="ignore"):
        out = safe_m + np.log(s)
    return np.where(np.isfinite(m), out, NEG_INF)


def _newton_decreasing_sum(e1: np.ndarray, c1: np.ndarray, b0=None,
                           tol: float = 1e-13, max_iter: int = 120):
    """Roots of sum_e exp(e1 - c1*b) = 1 along the last axis.

    Returns (b, iterations).  Rows with no finite term get b = -inf.
    Every iterate is floored at b_lo = max_e(e1_e/c1_e), which keeps all
    exponents nonpositive, so the iteration cannot overflow; a warm start
    ``b0`` (any side of the root) only shortens the path.
    """
    with np.errstate(invalid="ignore"):
        ratio = e1 / c1
    ratio = np.where(e1 == NEG_INF, NEG_INF, ratio)
    b_lo = np.max(ratio, axis=-1)
    void = b_lo == NEG_INF

    if b0 is None:
        b = b_lo.copy()
    else:
        b = np.maximum(np.where(np.isfinite(b0), b0, b_lo), b_lo)
    b = np.where(void, 0.0, b)

    iters = 0
    floor = np.where(void, 0.0, b_lo)
    for _ in range(max_iter):
        expo = e1 - c1 * b[..., None]
        t = np.exp(np.where(e1 == NEG_INF, NEG_INF, expo))
        T = np.sum(t, axis=-1)
        denom = np.sum(c1 * t, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            step = (T - 1.0) / denom
        step = np.where((denom > 0.0) & np.isfinite(step), step, 0.0)
        b = np.maximum(b + step, floor)
        iters += 1
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(b))):
            break
    return np.where(void, NEG_INF, b), iters


class _MixedBlockSolver:
    """Mixed sequence norm on every cube of one dyadic level at once.

    Terms: for cube c the semimodular of the scaled family is
        S_c(a) = sum_v exp(b_vc(a)),
        T_vc(a, b) = sum_e exp(e1[v,c,e] - p[c,e]*a - c1[c,e]*b) = 1
    with a = log(mu), b = log of the inner level weight.  S is convex and
    decreasing in a, so the same guarded Newton strategy applies.
    """

    def __init__(self, e1: np.ndarray, p: np.ndarray, c1: np.ndarray,
                 tol: float = 1e-12, max_outer: int = 200):
        self.e1 = e1          # (V, C, B)
        self.p = p            # (C, B)
        self.c1 = c1          # (C, B)
        self.tol = tol
        self.max_outer = max_outer
        with np.errstate(invalid="ignore", divide="ignore"):
            q = p / c1
        self.qmin = np.min(q, axis=-1)  # (C,)
        self.qmax = np.max(q, axis=-1)
        self.void_vc = np.all(e1 == NEG_INF, axis=-1)      # (V, C)
        self.void_c = np.all(self.void_vc, axis=0)         # (C,)

    def _inner_roots(self, a: np.ndarray, b_warm=None):
        e1eff = self.e1 - self.p[None, :, :] * a[None, :, None]
        b, it = _newton_decreasing_sum(e1eff, self.c1[None, :, :], b0=b_warm)
        with np.errstate(invalid="ignore"):
            expo = e1eff - self.c1[None, :, :] * np.where(
                b == NEG_INF, 0.0, b)[..., None]
        t = np.exp(np.where(self.e1 == NEG_INF, NEG_INF, expo))
        n1 = np.sum(self.p[None, :, :] * t, axis=-1)
        d1 = np.sum(self.c1[None, :, :] * t, axis=-1)
        return b, n1, d1, it

    def solve(self):
        V, C, B = self.e1.shape
        with np.errstate(invalid="ignore"):
            ratio = self.e1 / self.p[None, :, :]
        ratio = np.where(self.e1 == NEG_INF, NEG_INF, ratio)
        a_lo = np.max(np.max(ratio, axis=-1), axis=0)
        lse_v = _logsumexp(self.e1, axis=-1)              # (V, C)
        pmin = np.min(self.p, axis=-1)                    # (C,)
        c1max = np.max(self.c1, axis=-1)
        n_active = max(V, 1)
        cand = (lse_v + c1max[None, :] * np.log(n_active + 1.0)) / pmin[None, :]
        cand = np.where(self.void_vc, NEG_INF, cand)
        a_hi = np.maximum(np.max(cand, axis=0), 0.0)
        a_hi = np.maximum(a_hi, a_lo + 1e-9)

        a = np.where(self.void_c, 0.0, a_lo)
        lo = a.copy()
        hi = np.where(self.void_c, 0.0, a_hi)
        b = None
        a_prev = a.copy()
        total_inner = 0
        converged = self.void_c.copy()

        for _ in range(self.max_outer):
            if b is not None:
                # the inner roots move at a rate between qmin and qmax per
                # unit of a, so this lands at or left of every new root
                da = a - a_prev
                shift = np.where(da >= 0, self.qmax * da, self.qmin * da)
                b_warm = b - shift[None, :] - 1e-9 * (1.0 + np.abs(b))
            else:
                b_warm = None
            a_prev = a.copy()
            b, n1, d1, it = self._inner_roots(a, b_warm)
            total_inner += it
            hv = np.exp(np.where(b == NEG_INF, NEG_INF, b))
            S = np.sum(hv, axis=0)
            with np.errstate(invalid="ignore", divide="ignore"):
                rate = np.where(d1 > 0, n1 / d1, 0.0)
            denomS = np.sum(hv * rate, axis=0)

            on_left = S >= 1.0
            lo = np.where(~converged & on_left, np.maximum(lo, a), lo)
            hi = np.where(~converged & ~on_left, np.minimum(hi, a), hi)
            newly = ~converged & (hi - lo <= 4.0 * self.tol)
            converged = converged | newly
            if np.all(converged):
                break

            with np.errstate(invalid="ignore", divide="ignore"):
                step = (S - 1.0) / denomS
            step = np.where((denomS > 0) & np.isfinite(step), step, 0.0)
            prop = a + np.where(on_left, np.maximum(step, 2.0 * self.tol),
                                np.minimum(step, -2.0 * self.tol))
            inside = (prop > lo) & (prop < hi)
            a_new = np.where(inside, prop, 0.5 * (lo + hi))
            a = np.where(converged, a, a_new)

        value = np.where(self.void_c, 0.0, np.exp(0.5 * (lo + hi)))
        blo = np.where(self.void_c, 0.0, np.exp(lo))
        bhi = np.where(self.void_c, 0.0, np.exp(hi))
        return value, blo, bhi, total_inner


def _block_luxemburg(logg: np.ndarray, p: np.ndarray, log_delta: float):
    """Per-block Luxemburg norms of |g| along the last axis."""
    e1 = np.where(logg == NEG_INF, NEG_INF, p * logg + log_delta)
    b, it = _newton_decreasing_sum(e1, p)
    return np.exp(np.where(b == NEG_INF, NEG_INF, b)), it


def indicator_norms(p: ExponentField, v: int, grid: Grid) -> np.ndarray:
    """Luxemburg norms of every level-v cube indicator, in cube-index order."""
    pb = grid.block_partition(p.samples, v)
    logg = np.zeros_like(pb)
    vals, _ = _block_luxemburg(logg, pb, np.log(grid.delta))
    return vals


# ---------------------------------------------------------------------------
# mixed sequence space l^q(.)(L^p(.))
# ---------------------------------------------------------------------------

def _inner_inf_bisect(abs_f: np.ndarray, p: np.ndarray, q: np.ndarray,
                      delta: float, tol: float = 1e-12) -> float:
    """inf{t > 0 : sum |f|^p t^(-p/q) <= 1} by doubling and bisection."""
    if not np.any(abs_f):
        return 0.0
    with np.errstate(over="ignore"):
        powf = np.power(abs_f, p)

    def rho(t: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.sum(powf * np.power(t, -p / q)) * delta)

    lo = hi = 1.0
    r1 = rho(1.0)
    if r1 > 1.0:
        for _ in range(MAX_DOUBLINGS):
            lo = hi
            hi *= 2.0
            if rho(hi) <= 1.0:
                break
        else:
            raise BracketError("no upper bracket within 64 doublings")
    elif r1 < 1.0:
        for _ in range(MAX_DOUBLINGS):
            hi = lo
            lo /= 2.0
            if rho(lo) > 1.0:
                break
        else:
            return 0.0
    else:
        return 1.0
    for _ in range(MAX_BISECT):
        if hi - lo <= tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        if rho(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sup_norm_branch(fs, q: ExponentField) -> float:
    """sum_v || |f_v|^q ||_inf for the unbounded-integrability branch."""
    total = 0.0
    for f in fs:
        a = np.abs(f.values)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.exp(q.samples * _log_abs(f.values))
        t = np.where(a > 0, t, 0.0)
        total += float(np.max(t))
    return total


def mixed_modular(fs, p: ExponentField, q: ExponentField,
                  route: str = "bisect") -> float:
    """Semimodular of a finite family of grid functions.

    route="bisect" runs the defining per-level infima; route="direct" uses
    the equivalent sum of Luxemburg norms of |f_v|^q with exponent p/q.
    Both bisect the same scalar root problem and agree to tolerance.
    """
    if not fs:
        return 0.0
    grid = fs[0].grid
    for f in fs:
        if f.grid != grid:
            raise DomainError("family members on different grids")
    q.require_positive("summability exponent")
    if p.is_inf_sentinel():
        return _sup_norm_branch(fs, q)
    log_delta = float(np.log(grid.delta))
    total = 0.0
    for f in fs:
        if route == "bisect":
            total += _inner_inf_bisect(np.abs(f.values), p.samples,
                                       q.samples, grid.delta)
        elif route == "direct":
            la = _log_abs(f.values)
            e1 = np.where(la == NEG_INF, NEG_INF, p.samples * la + log_delta)
            b, _ = _newton_decreasing_sum(e1.reshape(1, -1),
                                          (p.samples / q.samples).reshape(1, -1))
            total += float(np.exp(b[0])) if b[0] != NEG_INF else 0.0
        else:
            raise DomainError(f"unknown route {route!r}")
    return total


def mixed_norm(fs, p: ExponentField, q: ExponentField,
               tol: float = DEFAULT_RTOL) -> NormResult:
    """inf{mu > 0 : semimodular of (f_v/mu) <= 1} on the unit-level bracket."""
    if not fs:
        return NormResult(0.0, tol, 0, (0.0, 0.0))
    grid = fs[0].grid
    q.require_positive("summability exponent")
    if q.sup_value > P_CAP:
        raise DomainError("mixed norm needs a bounded summability exponent")
    if p.is_inf_sentinel():
        return _mixed_norm_sup_branch(fs, q, tol)
    V = len(fs)
    N = grid.npoints
    la = np.stack([_log_abs(f.values).reshape(-1) for f in fs])
    ps = p.samples.reshape(1, -1)
    qs = q.samples.reshape(1, -1)
    e1 = np.where(la == NEG_INF, NEG_INF,
                  ps * la + np.log(grid.delta)).reshape(V, 1, N)
    solver = _MixedBlockSolver(e1, ps, ps / qs, tol=tol / 8.0)
    value, blo, bhi, iters = solver.solve()
    return NormResult(float(value[0]), tol, iters, (float(blo[0]), float(bhi[0])))


def _mixed_norm_sup_branch(fs, q: ExponentField, tol: float) -> NormResult:
    semim = lambda mu: sum(
        float(np.max(np.where(np.abs(f.values) > 0,
                              np.exp(q.samples * (_log_abs(f.values) - np.log(mu))),
                              0.0)))
        for f in fs)
    if semim(1.0) == 0.0:
        return NormResult(0.0, tol, 0, (0.0, 0.0))
    lo = hi = 1.0
    iters = 0
    if semim(1.0) > 1.0:
        while semim(hi) > 1.0 and iters < MAX_DOUBLINGS:
            lo, hi, iters = hi, hi * 2.0, iters + 1
    else:
        while semim(lo) <= 1.0 and iters < MAX_DOUBLINGS:
            hi, lo, iters = lo, lo / 2.0, iters + 1
    for _ in range(MAX_BISECT):
        if hi - lo <= tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        iters += 1
        if semim(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return NormResult(0.5 * (lo + hi), tol, iters, (lo, hi))


# ---------------------------------------------------------------------------
# cube-weighted suprema
# ---------------------------------------------------------------------------

def tilde_norm(f: GridFunction, p: ExponentField, tau: ExponentField,
               tol: float = DEFAULT_RTOL) -> NormResult:
    """sup over dyadic cubes P with |P| >= 1 of ||f chi_P / |P|^tau||_p."""
    _check_exponent(p, f)
    if tau.inf_value < 0:
        raise DomainError("tau must be nonnegative")
    grid = f.grid
    la = _log_abs(f.values)
    log_delta = float(np.log(grid.delta))
    best = 0.0
    witness = {}
    total_it = 0
    for w in range(-grid.jmax, 1):
        logg = la + (w * grid.dim * LN2) * tau.samples
        lb = grid.block_partition(logg, w)
        pb = grid.block_partition(p.samples, w)
        vals, it = _block_luxemburg(lb, pb, log_delta)
        total_it += it
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = float(vals[k])
            witness = {"cube": grid.cube_from_index(w, k)}
    lo = best * (1.0 - tol)
    return NormResult(best, tol, total_it, (max(lo, 0.0), best * (1.0 + tol)),
                      witness=witness)


def family_sup_norm(log_fields: np.ndarray, levels: np.ndarray,
                    p: ExponentField, q: ExponentField, tau: ExponentField,
                    grid: Grid, window: tuple, level_shift: int = 0,
                    tol: float = DEFAULT_RTOL) -> NormResult:
    """Sup over cubes P of the |P|^-tau weighted mixed norm of a family.

    ``log_fields[j]`` holds ln|g_j| on the grid and ``levels[j]`` the dyadic
    level of that row.  For a cube P at level w the rows with
    levels >= max(w, 0) + level_shift enter the inner mixed norm.
    """
    levels = np.asarray(levels, dtype=int)
    if log_fields.ndim != grid.dim + 1 or log_fields.shape[0] != levels.size:
        raise DomainError("family rows do not match levels")
    w_lo, w_hi = window
    if not (-grid.jmax <= w_lo <= w_hi <= grid.jfine):
        raise DomainError(f"cube window [{w_lo}, {w_hi}] outside grid range")
    q.require_positive("summability exponent")
    if q.sup_value > P_CAP:
        raise DomainError("family norm needs bounded summability exponent")

    log_delta = float(np.log(grid.delta))
    best = 0.0
    best_bracket = (0.0, 0.0)
    witness = {}
    per_level = {}
    total_inner = 0

    for w in range(w_lo, w_hi + 1):
        sel = levels >= max(w, 0) + level_shift
        if not np.any(sel):
            per_level[w] = 0.0
            continue
        logg = log_fields[sel] + (w * grid.dim * LN2) * tau.samples
        lb = grid.block_partition(logg, w)
        Va, C, B = lb.shape
        pb = grid.block_partition(p.samples, w)
        qb = grid.block_partition(q.samples, w)
        e1 = np.where(lb == NEG_INF, NEG_INF, pb[None] * lb + log_delta)
        solver = _MixedBlockSolver(e1, pb, pb / qb, tol=tol / 8.0)
        vals, blo, bhi, iters = solver.solve()
        total_inner += iters
        k = int(np.argmax(vals))
        per_level[w] = float(np.max(vals))
        if vals[k] > best:
            best = float(vals[k])
            best_bracket = (float(blo[k]), float(bhi[k]))
            witness = {"cube": grid.cube_from_index(w, k)}

    witness["per_level"] = per_level
    return NormResult(best, tol, total_inner, best_bracket, witness=witness)
