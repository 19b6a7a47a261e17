"""Discrete frequency-domain analysis/synthesis system for dyadic bands.

A low-pass profile and an annulus profile are laid out on the grid's
frequency lattice with plateau margins wide enough that adjacent bands only
overlap their nearest neighbours.  Dual profiles divide by the total energy
D(xi) and are renormalised per lattice frequency, so the reproducing sum is
1 to rounding wherever any band is active.  Band v lives on the annulus
|xi| ~ 2^v; the highest usable band is jfine - 1, and coefficient lattices
at level v subsample the grid with stride 2^(jfine - v), which is alias-free
because every band multiplier vanishes beyond twice its center frequency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import DomainError, Grid, GridFunction

__all__ = [
    "TransformPair",
    "build_pair",
    "band_project",
    "dual_band_project",
    "analyze",
    "synthesize",
    "calderon_residual",
]

# plateau / support radii of the two profiles: the annulus profile is 1 on
# [3/5, 5/3] and supported in [0.55, 1.95], the low-pass is 1 up to 1.7 and
# supported in |xi| <= 1.98
DEFAULT_MARGINS = {
    "phi_support_lo": 0.55,
    "phi_plateau_lo": 0.6,
    "phi_plateau_hi": 5.0 / 3.0,
    "phi_support_hi": 1.95,
    "Phi_plateau": 1.7,
    "Phi_support": 1.98,
}


def _smooth_step_down(t: np.ndarray) -> np.ndarray:
    """C-infinity transition from 1 at t<=0 to 0 at t>=1."""
    t = np.clip(t, 0.0, 1.0)
    out = np.zeros_like(t)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    out[mid] = np.exp(1.0 - 1.0 / (1.0 - tm * tm))
    out[t <= 0.0] = 1.0
    return out


def lowpass_profile(r: np.ndarray, margins=None) -> np.ndarray:
    m = margins or DEFAULT_MARGINS
    r = np.asarray(r, dtype=float)
    t = (r - m["Phi_plateau"]) / (m["Phi_support"] - m["Phi_plateau"])
    return _smooth_step_down(t)


def annulus_profile(r: np.ndarray, margins=None) -> np.ndarray:
    m = margins or DEFAULT_MARGINS
    r = np.asarray(r, dtype=float)
    up = _smooth_step_down((m["phi_plateau_lo"] - r)
                           / (m["phi_plateau_lo"] - m["phi_support_lo"]))
    down = _smooth_step_down((r - m["phi_plateau_hi"])
                             / (m["phi_support_hi"] - m["phi_plateau_hi"]))
    out = up * down
    out[r <= m["phi_support_lo"]] = 0.0
    return out


@dataclass
class TransformPair:
    """Frequency realisations of the analysis and synthesis systems."""

    grid: Grid
    margins: dict
    band_mult: list          # analysis multipliers, index = band level
    dual_mult: list          # synthesis multipliers, renormalised
    lower_bound_c: float
    support_radii: dict = field(default_factory=lambda: {
        "phi_inner": 0.5, "phi_outer": 2.0, "Phi_outer": 2.0})

    @property
    def v_max(self) -> int:
        return len(self.band_mult) - 1

    def analysis_mult(self, level: int, lowpass: bool = False) -> np.ndarray:
        """Band multiplier for any integer level (negative levels allowed).

        Positive in-range levels reuse the cached arrays; shifted levels
        sample the same profiles at the rescaled frequency.
        """
        if not lowpass and 1 <= level <= self.v_max:
            return self.band_mult[level]
        if lowpass and level == 0:
            return self.band_mult[0]
        r = self.grid.freq_radius() * 2.0 ** (-level)
        if lowpass:
            return lowpass_profile(r, self.margins)
        return annulus_profile(r, self.margins)


def build_pair(grid: Grid, margins: dict | None = None) -> TransformPair:
    """Construct the band system and its exact discrete dual."""
    if grid.jfine < 3:
        raise DomainError("need jfine >= 3 for at least three dyadic bands")
    m = dict(DEFAULT_MARGINS)
    if margins:
        m.update(margins)
    r = grid.freq_radius()
    v_max = grid.jfine - 1

    band = [lowpass_profile(r, m)]
    for v in range(1, v_max + 1):
        band.append(annulus_profile(r * 2.0 ** (-v), m))

    D = np.zeros_like(r)
    for mult in band:
        D += mult * mult
    active = D > 1e-14
    dual = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for mult in band:
            dm = np.where(active, mult / np.where(active, D, 1.0), 0.0)
            dual.append(dm)
    # per-frequency renormalisation: force the reproducing sum to exactly 1
    total = np.zeros_like(r)
    for bm, dm in zip(band, dual):
        total += bm * dm
    fix = np.where(active, np.where(total > 0, total, 1.0), 1.0)
    dual = [dm / fix for dm in dual]

    return TransformPair(grid=grid, margins=m, band_mult=band,
                         dual_mult=dual, lower_bound_c=1.0)


def calderon_residual(pair: TransformPair) -> float:
    """max |reproducing sum - 1| over the active frequency lattice."""
    r = pair.grid.freq_radius()
    total = np.zeros_like(r)
    active = np.zeros_like(r, dtype=bool)
    for bm, dm in zip(pair.band_mult, pair.dual_mult):
        total += bm * dm
        active |= (bm != 0.0) | (dm != 0.0)
    if not np.any(active):
        return 0.0
    return float(np.max(np.abs(total[active] - 1.0)))


def _apply_mult(f: GridFunction, mult: np.ndarray) -> GridFunction:
    return GridFunction(np.fft.ifftn(np.fft.fftn(f.values) * mult), f.grid)


def band_project(f: GridFunction, pair: TransformPair, v: int) -> GridFunction:
    """Convolution with the level-v analysis kernel (low-pass at v = 0)."""
    if not 0 <= v <= pair.v_max:
        raise DomainError(f"band {v} outside [0, {pair.v_max}]")
    return _apply_mult(f, pair.band_mult[v])


def dual_band_project(f: GridFunction, pair: TransformPair, v: int) -> GridFunction:
    """Convolution with the level-v synthesis kernel."""
    if not 0 <= v <= pair.v_max:
        raise DomainError(f"band {v} outside [0, {pair.v_max}]")
    return _apply_mult(f, pair.dual_mult[v])


def band_fields(f: GridFunction, pair: TransformPair, dual: bool = False) -> list:
    """All band projections of f, index = level."""
    spec = np.fft.fftn(f.values)
    mults = pair.dual_mult if dual else pair.band_mult
    return [np.fft.ifftn(spec * mult) for mult in mults]


def analyze(f: GridFunction, pair: TransformPair):
    """Coefficients <f, system_(v,m)> for all levels and cube positions.

    Level-v coefficients are 2^(-v n / 2) times the band projection sampled
    on the level-v cube corner lattice.
    """
    from .sequences import SequenceCoeffs

    grid = pair.grid
    if f.grid != grid:
        raise DomainError("function grid does not match the pair")
    spec = np.fft.fftn(f.values)
    entries = {}
    for v in range(pair.v_max + 1):
        u = np.fft.ifftn(spec * pair.band_mult[v])
        stride = grid.samples_per_axis(v)
        sub = u[(slice(None, None, stride),) * grid.dim]
        entries[v] = (2.0 ** (-v * grid.dim / 2.0) * sub).reshape(-1)
    return SequenceCoeffs(entries=entries, grid=grid)


def synthesize(coeffs, pair: TransformPair) -> GridFunction:
    """Sum of coefficient-weighted synthesis elements over all levels."""
    grid = pair.grid
    out = np.zeros(grid.shape, dtype=complex)
    for v, lam in coeffs.entries.items():
        if not 0 <= v <= pair.v_max:
            raise DomainError(f"coefficient level {v} outside [0, {pair.v_max}]")
        if not np.any(lam):
            continue
        stride = grid.samples_per_axis(v)
        c = grid.cubes_per_axis(v)
        comb = np.zeros(grid.shape, dtype=complex)
        comb[(slice(None, None, stride),) * grid.dim] = lam.reshape((c,) * grid.dim)
        scale = float(stride ** grid.dim) * 2.0 ** (v * grid.dim / 2.0)
        out += scale * np.fft.ifftn(np.fft.fftn(comb) * pair.dual_mult[v])
    return GridFunction(out, grid)
