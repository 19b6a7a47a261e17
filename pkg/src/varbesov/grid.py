"""Periodic sampling grid, dyadic cube lattice and sampled functions.

The fundamental domain is the torus [0, 2**jmax)**dim sampled at spacing
2**-jfine.  Dyadic cubes Q(v, m) = [2**-v * m, 2**-v * (m+1))**dim are
half-open so every sample belongs to exactly one cube per level; levels run
from -jmax (the whole domain) down to jfine (single-sample cubes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

__all__ = [
    "Grid",
    "DyadicCube",
    "GridFunction",
    "DomainError",
    "cube_geometry",
    "cubes_in_window",
    "indicator",
    "restrict",
]

LN2 = float(np.log(2.0))


class DomainError(ValueError):
    """Input outside the operation's domain."""


@dataclass(frozen=True)
class Grid:
    """Periodic sampling lattice of a dyadic torus."""

    dim: int
    jmax: int
    jfine: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError(f"dim must be 1 or 2, got {self.dim}")
        if self.jmax < 0:
            raise DomainError(f"jmax must be >= 0, got {self.jmax}")
        if self.jfine < 1:
            raise DomainError(f"jfine must be >= 1, got {self.jfine}")

    @property
    def side(self) -> float:
        return float(2 ** self.jmax)

    @property
    def spacing(self) -> float:
        return float(2.0 ** (-self.jfine))

    @property
    def points_per_axis(self) -> int:
        return 2 ** (self.jmax + self.jfine)

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    @property
    def npoints(self) -> int:
        return self.points_per_axis ** self.dim

    @property
    def delta(self) -> float:
        """Quadrature weight of one sample."""
        return self.spacing ** self.dim

    def axis_coords(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def coords(self) -> tuple:
        """Per-axis coordinate arrays broadcastable to ``shape``."""
        x = self.axis_coords()
        if self.dim == 1:
            return (x,)
        return (x[:, None], x[None, :])

    def periodic_delta(self, x: np.ndarray) -> np.ndarray:
        """Signed distance to the nearest periodic image of 0."""
        L = self.side
        return (x + L / 2.0) % L - L / 2.0

    def periodic_dist(self, x0) -> np.ndarray:
        """Euclidean periodic distance from every sample to the point x0."""
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        cs = self.coords()
        d2 = np.zeros(self.shape)
        for ax in range(self.dim):
            d2 = d2 + self.periodic_delta(cs[ax] - x0[ax]) ** 2
        return np.sqrt(d2)

    def freq_radius(self) -> np.ndarray:
        """|xi| on the angular frequency lattice xi = 2*pi*k/side."""
        xi = 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)
        if self.dim == 1:
            return np.abs(xi)
        return np.sqrt(xi[:, None] ** 2 + xi[None, :] ** 2)

    # -- dyadic block layout -------------------------------------------------

    def level_valid(self, v: int) -> bool:
        return -self.jmax <= v <= self.jfine

    def cubes_per_axis(self, v: int) -> int:
        if not self.level_valid(v):
            raise DomainError(f"level {v} outside [{-self.jmax}, {self.jfine}]")
        return 2 ** (v + self.jmax)

    def samples_per_axis(self, v: int) -> int:
        return 2 ** (self.jfine - v)

    def block_partition(self, values: np.ndarray, v: int) -> np.ndarray:
        """Rearrange grid samples into (..., cubes, samples-in-cube) for level v.

        Accepts one optional leading batch axis.  Row-major cube index: in 2-D
        cube (m0, m1) maps to m0*c + m1.
        """
        c = self.cubes_per_axis(v)
        s = self.samples_per_axis(v)
        lead = values.shape[: values.ndim - self.dim]
        if self.dim == 1:
            return values.reshape(*lead, c, s)
        nb = len(lead)
        perm = tuple(range(nb)) + (nb, nb + 2, nb + 1, nb + 3)
        return (
            values.reshape(*lead, c, s, c, s)
            .transpose(perm)
            .reshape(*lead, c * c, s * s)
        )

    def block_merge(self, blocks: np.ndarray, v: int) -> np.ndarray:
        """Inverse of :meth:`block_partition`."""
        c = self.cubes_per_axis(v)
        s = self.samples_per_axis(v)
        if self.dim == 1:
            return blocks.reshape(c * s)
        return (
            blocks.reshape(c, c, s, s).transpose(0, 2, 1, 3).reshape(c * s, c * s)
        )

    def cube_index(self, v: int, m) -> int:
        m = _as_mvec(m, self.dim)
        c = self.cubes_per_axis(v)
        k = 0
        for mi in m:
            k = k * c + int(mi)
        return k

    def cube_from_index(self, v: int, k: int) -> "DyadicCube":
        c = self.cubes_per_axis(v)
        if self.dim == 1:
            return DyadicCube(v, (k,))
        return DyadicCube(v, (k // c, k % c))


def _as_mvec(m, dim: int) -> tuple:
    if np.isscalar(m):
        m = (int(m),)
    else:
        m = tuple(int(mi) for mi in m)
    if len(m) != dim:
        raise DomainError(f"position {m} has wrong dimension for dim={dim}")
    return m


@dataclass(frozen=True)
class DyadicCube:
    """Dyadic cube Q(v, m) of side 2**-v with lower-left corner 2**-v * m."""

    v: int
    m: tuple

    def __post_init__(self):
        if np.isscalar(self.m):
            object.__setattr__(self, "m", (int(self.m),))
        else:
            object.__setattr__(self, "m", tuple(int(mi) for mi in self.m))

    @property
    def side(self) -> float:
        return float(2.0 ** (-self.v))

    @property
    def x_corner(self) -> tuple:
        return tuple(float(2.0 ** (-self.v) * mi) for mi in self.m)

    @property
    def center(self) -> tuple:
        l = self.side
        return tuple(x + l / 2.0 for x in self.x_corner)

    def volume(self, dim: int | None = None) -> float:
        dim = len(self.m) if dim is None else dim
        return self.side ** dim

    @property
    def v_plus(self) -> int:
        return max(self.v, 0)

    def validate(self, grid: Grid) -> None:
        if len(self.m) != grid.dim:
            raise DomainError(f"cube {self} has wrong dimension for {grid}")
        if not grid.level_valid(self.v):
            raise DomainError(
                f"cube level {self.v} outside [{-grid.jmax}, {grid.jfine}]"
            )
        c = grid.cubes_per_axis(self.v)
        for mi in self.m:
            if not 0 <= mi < c:
                raise DomainError(f"cube {self} outside fundamental domain")

    def sample_slices(self, grid: Grid) -> tuple:
        """Per-axis index slices of the samples inside the (half-open) cube."""
        self.validate(grid)
        s = grid.samples_per_axis(self.v)
        return tuple(slice(mi * s, (mi + 1) * s) for mi in self.m)


@dataclass
class GridFunction:
    """Complex samples of a function on the grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape:
            raise DomainError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid function has non-finite samples")

    def copy(self) -> "GridFunction":
        return GridFunction(self.values.copy(), self.grid)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self, other)
        return GridFunction(self.values + other.values, self.grid)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _check_same_grid(self, other)
        return GridFunction(self.values - other.values, self.grid)

    def __mul__(self, c) -> "GridFunction":
        return GridFunction(self.values * c, self.grid)

    __rmul__ = __mul__

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.delta))


def _check_same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.grid != g.grid:
        raise DomainError("grid mismatch")


def cube_geometry(Q: DyadicCube, grid: Grid) -> dict:
    """Side length, corner, center, volume and clipped level of a cube."""
    Q.validate(grid)
    return {
        "l": Q.side,
        "x_Q": Q.x_corner,
        "c_Q": Q.center,
        "volume": Q.volume(grid.dim),
        "v_plus": Q.v_plus,
    }


def cubes_in_window(grid: Grid, v_lo: int, v_hi: int) -> list:
    """All dyadic cubes of levels v_lo..v_hi inside the fundamental domain."""
    if not (-grid.jmax <= v_lo <= v_hi <= grid.jfine):
        raise DomainError(
            f"bad level window [{v_lo}, {v_hi}] for jmax={grid.jmax}, jfine={grid.jfine}"
        )
    out = []
    for v in range(v_lo, v_hi + 1):
        c = grid.cubes_per_axis(v)
        if grid.dim == 1:
            out.extend(DyadicCube(v, (m,)) for m in range(c))
        else:
            out.extend(
                DyadicCube(v, (m0, m1)) for m0 in range(c) for m1 in range(c)
            )
    return out


def indicator(Q: DyadicCube, grid: Grid) -> GridFunction:
    """Characteristic function of the half-open cube, sampled on the grid."""
    vals = np.zeros(grid.shape)
    vals[Q.sample_slices(grid)] = 1.0
    return GridFunction(vals, grid)


def restrict(f: GridFunction, Q: DyadicCube) -> GridFunction:
    """Pointwise product with the cube indicator."""
    vals = np.zeros_like(f.values)
    sl = Q.sample_slices(f.grid)
    vals[sl] = f.values[sl]
    return GridFunction(vals, f.grid)


DEFAULT_GRID_1D = Grid(dim=1, jmax=3, jfine=7)
DEFAULT_GRID_2D = Grid(dim=2, jmax=2, jfine=5)


def default_grid(dim: int = 1) -> Grid:
    return DEFAULT_GRID_1D if dim == 1 else DEFAULT_GRID_2D


def grid_from_json(obj: dict) -> Grid:
    try:
        return Grid(dim=int(obj["dim"]), jmax=int(obj["jmax"]), jfine=int(obj["jfine"]))
    except KeyError as exc:
        raise DomainError(f"grid spec missing key {exc}") from exc
