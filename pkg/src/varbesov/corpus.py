"""Reproducible test corpora: band-limited functions, coefficient sequences,
exponent families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentField, bump_field, constant_field, ramp_field
from .grid import Grid, GridFunction
from .sequences import SequenceCoeffs, SpaceParams

__all__ = ["Corpus", "build_corpus", "default_exponent_sets",
           "band_limited_function", "single_band_function"]


@dataclass
class Corpus:
    """Seeded collection of functions, sequences and exponent sets."""

    seed: int
    functions: list
    exponent_sets: list
    sequences: list = field(default_factory=list)
    size: int = 0

    def __post_init__(self):
        if not self.size:
            self.size = len(self.functions) + len(self.sequences)


def _spectrum_mask(grid: Grid, vband: int | None = None) -> np.ndarray:
    r = grid.freq_radius()
    if vband is None:
        # all bands up to jfine-2, kept inside the covered range
        return r <= 0.9 * 2.0 ** (grid.jfine - 1)
    lo, hi = 0.62 * 2.0 ** vband, 1.6 * 2.0 ** vband
    return (r >= lo) & (r <= hi)


def band_limited_function(grid: Grid, rng, kind: str = "random") -> GridFunction:
    spec = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    if kind == "bump":
        # spatially localised profile, then spectrally truncated
        x0 = rng.uniform(0, grid.side, size=grid.dim)
        d = grid.periodic_dist(x0)
        w = rng.uniform(0.3, 1.5)
        vals = np.exp(-0.5 * (d / w) ** 2)
        spec = np.fft.fftn(vals) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    f = np.fft.ifftn(spec * _spectrum_mask(grid))
    g = GridFunction(f, grid)
    scale = g.l2_norm()
    return GridFunction(f / scale, grid) if scale > 0 else g


def single_band_function(grid: Grid, rng, vband: int) -> GridFunction:
    spec = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    f = np.fft.ifftn(spec * _spectrum_mask(grid, vband))
    g = GridFunction(f, grid)
    scale = g.l2_norm()
    return GridFunction(f / scale, grid) if scale > 0 else g


def random_sequence(grid: Grid, rng, v_hi: int | None = None,
                    density: float = 0.25) -> SequenceCoeffs:
    v_hi = grid.jfine - 1 if v_hi is None else v_hi
    entries = {}
    for v in range(0, v_hi + 1):
        n_pos = grid.cubes_per_axis(v) ** grid.dim
        vals = (rng.normal(size=n_pos) + 1j * rng.normal(size=n_pos))
        keep = rng.random(n_pos) < max(density, 4.0 / n_pos)
        entries[v] = vals * keep * 2.0 ** (-0.6 * v)
    return SequenceCoeffs(entries, grid)


def spike_sequence(grid: Grid, rng, v: int | None = None) -> SequenceCoeffs:
    v = int(rng.integers(0, grid.jfine - 1)) if v is None else v
    n_pos = grid.cubes_per_axis(v) ** grid.dim
    arr = np.zeros(n_pos, dtype=complex)
    arr[rng.integers(0, n_pos)] = 1.0 + 0.5j
    return SequenceCoeffs({v: arr}, grid)


def default_exponent_sets(grid: Grid) -> list:
    """Curated space parameters; every set is log-Holder by construction
    and satisfies tau^+ < (tau p)^- so the strongest lemma hypotheses hold."""
    mid = grid.side / 2.0
    sets = []
    sets.append(SpaceParams(
        constant_field(grid, 0.5, "smoothness"),
        constant_field(grid, 0.4, "tau"),
        constant_field(grid, 2.5),
        constant_field(grid, 2.0, "summability"),
    ))
    sets.append(SpaceParams(
        bump_field(grid, 0.3, 0.6, mid, 1.4, "smoothness", decay_limit=0.3),
        constant_field(grid, 0.4, "tau"),
        bump_field(grid, 2.0, 0.8, mid * 0.5, 1.2, decay_limit=2.0),
        bump_field(grid, 1.5, 1.0, mid * 1.5, 1.6, "summability", decay_limit=1.5),
    ))
    sets.append(SpaceParams(
        ramp_field(grid, -0.2, 0.7, mid * 0.5, 2.0, "smoothness", decay_limit=-0.2),
        bump_field(grid, 0.3, 0.15, mid, 1.8, "tau", decay_limit=0.3),
        constant_field(grid, 3.0),
        constant_field(grid, 1.2, "summability"),
    ))
    sets.append(SpaceParams(
        bump_field(grid, -0.3, 0.5, mid * 1.2, 1.0, "smoothness", decay_limit=-0.3),
        constant_field(grid, 0.35, "tau"),
        bump_field(grid, 2.0, 0.5, mid, 2.0, decay_limit=2.0),
        bump_field(grid, 0.8, 0.6, mid * 0.8, 1.3, "summability", decay_limit=0.8),
    ))
    return sets


def refine_function(f: GridFunction, fine: Grid) -> GridFunction:
    """The same band-limited function sampled on a finer grid.

    The coarse spectrum embeds into the fine frequency lattice (the lattices
    agree because both grids share the fundamental domain), scaled by the
    point-count ratio so sample values are preserved.
    """
    coarse = f.grid
    if fine.dim != coarse.dim or fine.jmax != coarse.jmax \
            or fine.jfine < coarse.jfine:
        raise ValueError("refinement target must share jmax and be finer")
    spec = np.fft.fftn(f.values)
    Nc, Nf = coarse.points_per_axis, fine.points_per_axis
    out = np.zeros(fine.shape, dtype=complex)
    h = Nc // 2
    if coarse.dim == 1:
        out[:h] = spec[:h]
        out[Nf - h:] = spec[Nc - h:]
    else:
        src = [(slice(0, h), slice(0, h)), (slice(0, h), slice(Nc - h, Nc)),
               (slice(Nc - h, Nc), slice(0, h)),
               (slice(Nc - h, Nc), slice(Nc - h, Nc))]
        dst = [(slice(0, h), slice(0, h)), (slice(0, h), slice(Nf - h, Nf)),
               (slice(Nf - h, Nf), slice(0, h)),
               (slice(Nf - h, Nf), slice(Nf - h, Nf))]
        for s, d in zip(src, dst):
            out[d] = spec[s]
    scale = (Nf / Nc) ** coarse.dim
    return GridFunction(np.fft.ifftn(out * scale), fine)


def refine_corpus(corpus: Corpus, fine: Grid) -> Corpus:
    """Same functions and sequences carried to a finer grid."""
    functions = [refine_function(f, fine) for f in corpus.functions]
    sequences = [SequenceCoeffs(dict(lam.entries), fine)
                 for lam in corpus.sequences]
    return Corpus(seed=corpus.seed, functions=functions,
                  exponent_sets=default_exponent_sets(fine),
                  sequences=sequences)


def build_corpus(grid: Grid, seed: int, n_functions: int = 20,
                 n_sequences: int = 50) -> Corpus:
    rng = np.random.default_rng(seed)
    functions = []
    for i in range(n_functions):
        kind = ("random", "bump", "single")[i % 3]
        if kind == "single":
            v = 1 + i % max(grid.jfine - 3, 1)
            functions.append(single_band_function(grid, rng, v))
        else:
            functions.append(band_limited_function(grid, rng, kind))
    sequences = []
    for i in range(n_sequences):
        if i % 5 == 4:
            sequences.append(spike_sequence(grid, rng))
        else:
            sequences.append(random_sequence(grid, rng))
    return Corpus(seed=seed, functions=functions,
                  exponent_sets=default_exponent_sets(grid),
                  sequences=sequences)
