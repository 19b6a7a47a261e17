"""Sequence spaces on the dyadic coefficient lattice.

Coefficients live on the level-v cube corner lattices, stored densely per
level in cube-index order.  The sequence-space quasi-norm reuses the
cube-supremum mixed-norm engine on the piecewise-constant coefficient
fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentField
from .grid import DomainError, DyadicCube, Grid, LN2
from .norms import (
    NEG_INF,
    DEFAULT_RTOL,
    NormResult,
    _log_abs,
    family_sup_norm,
    indicator_norms,
)

__all__ = [
    "SequenceCoeffs",
    "SpaceParams",
    "b_norm",
    "lambda_star",
    "coeff_bound_ratio",
    "smooth_levels",
]


@dataclass
class SequenceCoeffs:
    """Finitely supported coefficients indexed by (level, cube position)."""

    entries: dict
    grid: Grid

    def __post_init__(self):
        clean = {}
        for v, arr in self.entries.items():
            v = int(v)
            if v < 0:
                raise DomainError("coefficient levels must be >= 0")
            if v > self.grid.jfine:
                raise DomainError(
                    f"coefficient level {v} finer than the grid ({self.grid.jfine})"
                )
            n_pos = self.grid.cubes_per_axis(v) ** self.grid.dim
            arr = np.asarray(arr, dtype=complex).reshape(-1)
            if arr.size != n_pos:
                raise DomainError(
                    f"level {v} expects {n_pos} positions, got {arr.size}"
                )
            clean[v] = arr
        self.entries = clean

    @property
    def v_max(self) -> int:
        return max(self.entries.keys(), default=0)

    def levels(self) -> list:
        return sorted(self.entries.keys())

    def get(self, v: int, m) -> complex:
        k = self.grid.cube_index(v, m)
        return complex(self.entries[v][k]) if v in self.entries else 0.0

    def set(self, v: int, m, value: complex) -> None:
        if v not in self.entries:
            n_pos = self.grid.cubes_per_axis(v) ** self.grid.dim
            self.entries[v] = np.zeros(n_pos, dtype=complex)
        self.entries[v][self.grid.cube_index(v, m)] = value

    def nonzero(self):
        for v in self.levels():
            arr = self.entries[v]
            for k in np.nonzero(arr)[0]:
                yield self.grid.cube_from_index(v, int(k)), arr[k]

    def scaled(self, c: complex) -> "SequenceCoeffs":
        return SequenceCoeffs({v: c * a for v, a in self.entries.items()}, self.grid)

    def abs_max(self) -> float:
        vals = [np.max(np.abs(a)) for a in self.entries.values() if a.size]
        return float(max(vals, default=0.0))

    def to_grid_field(self, v: int) -> np.ndarray:
        """Expand the level-v coefficients to a piecewise-constant grid array."""
        s = self.grid.samples_per_axis(v)
        c = self.grid.cubes_per_axis(v)
        lam = self.entries[v]
        if self.grid.dim == 1:
            return np.repeat(lam, s)
        out = np.repeat(np.repeat(lam.reshape(c, c), s, axis=0), s, axis=1)
        return out

    def to_json(self) -> list:
        out = []
        for Q, val in self.nonzero():
            out.append({"v": Q.v, "m": list(Q.m),
                        "re": float(val.real), "im": float(val.imag)})
        return out

    @classmethod
    def from_json(cls, items: list, grid: Grid) -> "SequenceCoeffs":
        coeffs = cls(entries={}, grid=grid)
        for it in items:
            coeffs.set(int(it["v"]), tuple(it["m"]),
                       complex(it.get("re", 0.0), it.get("im", 0.0)))
        return coeffs


@dataclass
class SpaceParams:
    """The four exponent fields of a Besov-type space plus the cube window."""

    alpha: ExponentField
    tau: ExponentField
    p: ExponentField
    q: ExponentField
    window: tuple = None

    def __post_init__(self):
        grid = self.alpha.grid
        for f in (self.tau, self.p, self.q):
            if f.grid != grid:
                raise DomainError("space exponents live on different grids")
        if self.tau.inf_value < 0:
            raise DomainError("tau must be nonnegative")
        if self.window is None:
            self.window = (-grid.jmax, grid.jfine)

    @property
    def grid(self) -> Grid:
        return self.alpha.grid

    def tau_positive(self) -> None:
        if self.tau.inf_value <= 0:
            raise DomainError("operation requires tau^- > 0")

    def tau_p_min(self) -> float:
        return float(np.min(self.tau.samples * self.p.samples))

    def is_constant(self) -> bool:
        return all(f.is_constant() for f in (self.alpha, self.tau, self.p, self.q))


def _coeff_log_fields(lam: SequenceCoeffs, alpha: ExponentField, grid: Grid):
    """ln of the weighted piecewise-constant level fields, plus the levels."""
    levels = [v for v in lam.levels() if np.any(lam.entries[v])]
    logs = np.full((len(levels),) + grid.shape, NEG_INF)
    for j, v in enumerate(levels):
        base = _log_abs(lam.to_grid_field(v))
        weight = v * (alpha.samples + grid.dim / 2.0) * LN2
        logs[j] = np.where(base == NEG_INF, NEG_INF, base + weight)
    return np.asarray(levels, dtype=int), logs


def b_norm(lam: SequenceCoeffs, sp: SpaceParams, grid: Grid,
           tol: float = DEFAULT_RTOL) -> NormResult:
    """Sequence-space quasi-norm: cube supremum of weighted mixed norms."""
    if lam.grid != grid or sp.grid != grid:
        raise DomainError("coefficients and space parameters must share the grid")
    levels, logs = _coeff_log_fields(lam, sp.alpha, grid)
    if levels.size == 0:
        return NormResult(0.0, tol, 0, (0.0, 0.0))
    return family_sup_norm(logs, levels, sp.p, sp.q, sp.tau, grid,
                           sp.window, tol=tol)


def lambda_star(lam: SequenceCoeffs, r: float, d: float) -> SequenceCoeffs:
    """Discrete maximal smoothing of the coefficients.

    lambda*_(v,m) = (sum_h |lambda_(v,h)|^r (1 + |h-m|)^(-d))^(1/r) with the
    periodic index distance; the full index torus is evaluated per level.
    The h = m term is enforced exactly so lambda* >= |lambda| pointwise.
    """
    if r <= 0 or d <= 0:
        raise DomainError("lambda_star needs r > 0 and d > 0")
    grid = lam.grid
    out = {}
    for v, arr in lam.entries.items():
        c = grid.cubes_per_axis(v)
        mag_r = np.abs(arr) ** r
        if grid.dim == 1:
            idx = np.arange(c, dtype=float)
            dist = np.abs((idx + c / 2.0) % c - c / 2.0)
            kernel = (1.0 + dist) ** (-d)
            conv = np.real(np.fft.ifft(np.fft.fft(mag_r) * np.fft.fft(kernel)))
        else:
            idx = np.arange(c, dtype=float)
            wrap = np.abs((idx + c / 2.0) % c - c / 2.0)
            dist = np.sqrt(wrap[:, None] ** 2 + wrap[None, :] ** 2)
            kernel = (1.0 + dist) ** (-d)
            m2 = mag_r.reshape(c, c)
            conv = np.real(np.fft.ifft2(np.fft.fft2(m2) * np.fft.fft2(kernel)))
            conv = conv.reshape(-1)
        conv = np.maximum(conv, np.abs(arr) ** r)
        out[v] = conv ** (1.0 / r)
    return SequenceCoeffs(entries=out, grid=grid)


def coeff_bound_ratio(lam: SequenceCoeffs, sp: SpaceParams, grid: Grid) -> float:
    """Empirical constant of the single-coefficient bound.

    max over (v, m, x in Q) of |lambda_(v,m)| 2^(v(alpha(x)+n/2))
    |Q|^(-tau(x)) ||chi_(v,m)||_p divided by the sequence norm.
    """
    bn = b_norm(lam, sp, grid)
    if bn.value <= 0.0:
        raise DomainError("coefficient bound needs a nonzero sequence norm")
    n = grid.dim
    best = 0.0
    for v in lam.levels():
        arr = lam.entries[v]
        if not np.any(arr):
            continue
        chi = indicator_norms(sp.p, v, grid)
        per_cube = np.abs(arr) * chi
        field_c = np.abs(SequenceCoeffs({v: per_cube}, grid).to_grid_field(v))
        weight = np.exp(v * (sp.alpha.samples + n / 2.0) * LN2
                        + v * n * sp.tau.samples * LN2)
        best = max(best, float(np.max(field_c * weight)))
    return best / bn.value


def smooth_levels(fs: list, delta: float) -> list:
    """g_v = sum_k 2^(-|k-v| delta) f_k over the available levels."""
    if delta <= 0:
        raise DomainError("smoothing rate must be positive")
    if not fs:
        return []
    grid = fs[0].grid
    vals = np.stack([f.values for f in fs])
    V = len(fs)
    k = np.arange(V)
    w = 2.0 ** (-np.abs(k[None, :] - k[:, None]) * delta)
    out = np.tensordot(w, vals, axes=(1, 0))
    from .grid import GridFunction
    return [GridFunction(out[v], grid) for v in range(V)]
