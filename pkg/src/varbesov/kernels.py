"""Polynomial-decay majorant kernels, periodic convolution, maximal operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DomainError, DyadicCube, Grid, GridFunction

__all__ = [
    "EtaKernel",
    "eta_evaluate",
    "eta_l1_norm",
    "periodization_error_bound",
    "convolve",
    "hl_maximal",
    "cube_average",
]


@dataclass(frozen=True)
class EtaKernel:
    """Scaled decay kernel 2^(n v) (1 + 2^v |x|)^(-order)."""

    v: int
    order: float

    def scale(self) -> float:
        return float(2.0 ** self.v)


def eta_evaluate(k: EtaKernel, grid: Grid) -> GridFunction:
    """Sample the kernel with periodic distance (nearest image only)."""
    if k.order <= grid.dim:
        raise DomainError(
            f"kernel order {k.order} must exceed the dimension {grid.dim}"
        )
    d = grid.periodic_dist(np.zeros(grid.dim))
    s = k.scale()
    vals = s ** grid.dim * (1.0 + s * d) ** (-k.order)
    return GridFunction(vals, grid)


def eta_l1_norm(k: EtaKernel, grid: Grid) -> float:
    g = eta_evaluate(k, grid)
    return float(np.sum(np.abs(g.values)) * grid.delta)


def periodization_error_bound(k: EtaKernel, grid: Grid) -> float:
    """Crude upper estimate of the mass in the neglected periodic images."""
    s = k.scale()
    half = grid.side / 2.0
    ring = 3 ** grid.dim - 1
    return ring * (1.0 + s * half) ** (-(k.order - grid.dim))


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Periodic quadrature convolution, computed in the frequency domain."""
    if f.grid != g.grid:
        raise DomainError("grid mismatch")
    F = np.fft.fftn(f.values) * np.fft.fftn(g.values)
    return GridFunction(np.fft.ifftn(F) * f.grid.delta, f.grid)


def _window_sum_axis(a: np.ndarray, W: int, axis: int) -> np.ndarray:
    """Circular windowed sums over [i - W//2, i - W//2 + W) along an axis."""
    N = a.shape[axis]
    if W == 1:
        return a.copy()
    if W >= N:
        return np.broadcast_to(np.sum(a, axis=axis, keepdims=True), a.shape).copy()
    aa = np.concatenate([a, a], axis=axis)
    c = np.cumsum(aa, axis=axis)
    start = (np.arange(N) - W // 2) % N
    end = start + W - 1
    hi = np.take(c, end, axis=axis)
    lo = np.take(c, start - 1, axis=axis)
    zero = start == 0
    if np.any(zero):
        idx = [slice(None)] * a.ndim
        idx[axis] = zero
        lo[tuple(idx)] = 0.0
    return hi - lo


def hl_maximal(f: GridFunction) -> GridFunction:
    """Discrete Hardy-Littlewood maximal function over dyadic cube radii.

    At each sample the maximum of cube averages of |f| over periodic cubes
    of side 2r centered there, r in {2^(-jfine-1)} + {2^(-jfine), ...,
    2^(jmax-1)}; the first radius is the single-sample window, which keeps
    the pointwise bound Mf >= |f| exact on the grid.
    """
    grid = f.grid
    a = np.abs(f.values)
    best = a.copy()
    N = grid.points_per_axis
    W = 2
    while W <= N:
        s = a
        for ax in range(grid.dim):
            s = _window_sum_axis(s, W, ax)
        best = np.maximum(best, s / float(W ** grid.dim))
        W *= 2
    return GridFunction(best, grid)


def cube_average(f: GridFunction, Q: DyadicCube) -> float:
    """Mean of |f| over the samples of the cube."""
    sl = Q.sample_slices(f.grid)
    return float(np.mean(np.abs(f.values[sl])))
