"""Constant-exponent reference formulas.

Independent closed-form route used to cross-check the variable-exponent
pipeline whenever all exponents are constant.  Deliberately written with
plain power sums, no root finding.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, GridFunction

__all__ = [
    "scalar_modular",
    "scalar_luxemburg",
    "scalar_mixed_norm",
    "scalar_b_norm",
    "scalar_besov_norm",
]


def scalar_modular(f: GridFunction, p: float) -> float:
    return float(np.sum(np.abs(f.values) ** p) * f.grid.delta)


def scalar_luxemburg(f: GridFunction, p: float) -> float:
    return scalar_modular(f, p) ** (1.0 / p)


def scalar_mixed_norm(fs, p: float, q: float) -> float:
    if not fs:
        return 0.0
    return float(np.sum([scalar_luxemburg(f, p) ** q for f in fs]) ** (1.0 / q))


def _lp_on_mask(values: np.ndarray, mask: np.ndarray, p: float, delta: float) -> float:
    return float(np.sum(np.abs(values[mask]) ** p) * delta) ** (1.0 / p)


def scalar_b_norm(entries: dict, alpha: float, tau: float, p: float, q: float,
                  grid: Grid, window: tuple) -> float:
    """Sequence-space norm for constant exponents.

    ``entries`` maps level v >= 0 to the dense coefficient array of that
    level (cube-index order).  For each window cube P the inner sum runs
    over levels >= max(v_P, 0); the level-v coefficient field is piecewise
    constant, so its p-integral over P is an explicit coefficient sum.
    """
    n = grid.dim
    best = 0.0
    for w in range(window[0], window[1] + 1):
        vol_P = 2.0 ** (-w * n)
        ncubes = grid.cubes_per_axis(w) ** n
        for k in range(ncubes):
            acc = 0.0
            for v, lam in entries.items():
                if v < max(w, 0):
                    continue
                lam_b = _coeffs_in_cube(lam, v, w, k, grid)
                s = float(np.sum(np.abs(lam_b) ** p) * 2.0 ** (-v * n))
                if s > 0.0:
                    term = 2.0 ** (v * (alpha + n / 2.0)) * s ** (1.0 / p)
                    acc += term ** q
            val = vol_P ** (-tau) * acc ** (1.0 / q)
            best = max(best, val)
    return best


def _coeffs_in_cube(lam: np.ndarray, v: int, w: int, k: int, grid: Grid):
    """Level-v coefficients whose cubes lie inside window cube k of level w."""
    r = 2 ** (v - w)
    cw = grid.cubes_per_axis(w)
    if grid.dim == 1:
        return lam[k * r:(k + 1) * r]
    cv = grid.cubes_per_axis(v)
    m0, m1 = divmod(k, cw)
    block = lam.reshape(cv, cv)[m0 * r:(m0 + 1) * r, m1 * r:(m1 + 1) * r]
    return block.reshape(-1)


def scalar_besov_norm(band_fields, alpha: float, tau: float, p: float, q: float,
                      grid: Grid, window: tuple) -> float:
    """Besov-type norm for constant exponents from precomputed band fields."""
    n = grid.dim
    best = 0.0
    vmax = len(band_fields) - 1
    for w in range(window[0], window[1] + 1):
        vol_P = 2.0 ** (-w * n)
        ncubes = grid.cubes_per_axis(w) ** n
        blocks = [grid.block_partition(np.abs(g), w) for g in band_fields]
        for k in range(ncubes):
            acc = 0.0
            for v in range(max(w, 0), vmax + 1):
                lp = float(np.sum(blocks[v][k] ** p) * grid.delta) ** (1.0 / p)
                acc += (2.0 ** (v * alpha) * lp) ** q
            val = vol_P ** (-tau) * acc ** (1.0 / q)
            best = max(best, val)
    return best
