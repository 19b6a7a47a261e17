"""Variable exponents sampled on the grid and their regularity diagnostics.

An exponent is a real field p(.) on the torus.  Class membership (positive
lower bound, lower bound >= 1, log-Holder regularity of 1/p) is estimated
empirically from the samples; the estimates are grid-relative, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import DomainError, Grid

__all__ = [
    "P_CAP",
    "ExponentField",
    "LogHolderReport",
    "constant_field",
    "bump_field",
    "ramp_field",
    "exponent_from_json",
    "estimate_log_holder",
    "conjugate_exponent",
    "classify",
]

# Finite stand-in for an unbounded exponent.  Everything except the explicit
# l^q(L^inf) branch of the mixed norms treats this as a plain large exponent.
P_CAP = 100.0

# Smallest admissible lower bound for integrability/summability exponents.
P0_FLOOR = 1e-3

# Empirical local log-Holder constants of 1/p above this value flag the field
# as outside the log-Holder class.  Calibrated on the smooth generator
# families (constant / bump / tent ramp: constants stay under 1.1 on the
# default grids for widths >= 0.3) versus step discontinuities, whose
# estimate is jump * log(e + 2^jfine) -- above 2.2 at jfine = 6 for any
# jump of 1/p exceeding one half -- and grows with refinement.
LOG_HOLDER_THRESHOLD = 1.6

ROLES = ("integrability", "summability", "smoothness", "tau")


@dataclass
class ExponentField:
    """A variable exponent sampled on the grid."""

    samples: np.ndarray
    role: str
    grid: Grid
    decay_limit: Optional[float] = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.role not in ROLES:
            raise DomainError(f"unknown exponent role {self.role!r}")
        if self.samples.shape != self.grid.shape:
            raise DomainError("exponent samples do not match grid shape")
        if not np.all(np.isfinite(self.samples)) and not self.is_inf_sentinel():
            raise DomainError("exponent field has non-finite samples")
        if self.role in ("integrability", "summability"):
            if float(np.min(self.samples)) < P0_FLOOR:
                raise DomainError(
                    f"{self.role} exponent must stay >= {P0_FLOOR}, "
                    f"got min {np.min(self.samples)}"
                )
        self._log_holder_cache = None

    @property
    def inf_value(self) -> float:
        return float(np.min(self.samples))

    @property
    def sup_value(self) -> float:
        return float(np.max(self.samples))

    def is_constant(self) -> bool:
        return self.inf_value == self.sup_value

    def is_inf_sentinel(self) -> bool:
        """True when the field plays the role of an unbounded exponent."""
        return bool(np.all(self.samples >= P_CAP))

    def require_positive(self, what: str = "exponent") -> None:
        if self.inf_value <= 0.0:
            raise DomainError(f"{what} must have positive lower bound")

    def with_samples(self, samples: np.ndarray) -> "ExponentField":
        return ExponentField(samples, self.role, self.grid, self.decay_limit)


@dataclass
class LogHolderReport:
    """Empirical log-Holder constants and the pairs that realise them."""

    local_constant: float
    decay_constant: Optional[float]
    witness_pairs: list
    decay_witness: Optional[tuple] = None


def constant_field(grid: Grid, value: float, role: str = "integrability",
                   decay_limit: Optional[float] = None) -> ExponentField:
    if decay_limit is None:
        decay_limit = float(value)
    return ExponentField(np.full(grid.shape, float(value)), role, grid, decay_limit)


def _smooth_bump(t: np.ndarray) -> np.ndarray:
    """C-infinity bump exp(1 - 1/(1-t^2)) on |t| < 1, zero outside."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out


def bump_field(grid: Grid, c0: float, c1: float, x0, w: float,
               role: str = "integrability",
               decay_limit: Optional[float] = None) -> ExponentField:
    """c0 + c1 * bump(dist(x, x0)/w) with periodic distance."""
    if w <= 0:
        raise DomainError("bump width must be positive")
    d = grid.periodic_dist(x0)
    vals = c0 + c1 * _smooth_bump(d / w)
    if decay_limit is None:
        decay_limit = float(c0)
    return ExponentField(vals, role, grid, decay_limit)


def ramp_field(grid: Grid, c0: float, c1: float, x0: float, w: float,
               role: str = "integrability",
               decay_limit: Optional[float] = None) -> ExponentField:
    """Clamped ramp c0 -> c0 + c1 along the first axis, torus-continuous.

    Rises linearly over width w, holds the plateau for w, falls back over
    w; values are clamped to [c0, c0 + c1].  The tent keeps the field
    Lipschitz across the periodic wrap, which any on-axis one-way ramp
    cannot be.
    """
    if w <= 0:
        raise DomainError("ramp width must be positive")
    if 3.0 * w > grid.side:
        raise DomainError("ramp needs 3w within one period")
    x = grid.coords()[0]
    s = (x - x0) % grid.side
    t = np.clip(np.minimum(s / w, (3.0 * w - s) / w), 0.0, 1.0)
    vals = c0 + c1 * t + np.zeros(grid.shape)
    return ExponentField(vals, role, grid, decay_limit)


def exponent_from_json(grid: Grid, obj: dict, role: str = "integrability") -> ExponentField:
    """Build a field from {"kind": ..., "params": {...}, "decay_limit": ...}."""
    kind = obj.get("kind")
    params = obj.get("params", {})
    decay = obj.get("decay_limit")
    if kind == "constant":
        return constant_field(grid, params["value"], role, decay)
    if kind == "bump":
        x0 = params.get("x0", grid.side / 2.0)
        return bump_field(grid, params["c0"], params["c1"], x0,
                          params.get("w", 1.0), role, decay)
    if kind == "ramp":
        return ramp_field(grid, params["c0"], params["c1"],
                          params.get("x0", grid.side / 4.0),
                          params.get("w", 1.0), role, decay)
    raise DomainError(f"unknown exponent kind {kind!r}")


def _log_weight(dist: np.ndarray) -> np.ndarray:
    return np.log(np.e + 1.0 / dist)


def estimate_log_holder(g: ExponentField, grid: Grid,
                        chunk: int = 512) -> LogHolderReport:
    """Brute-force modulus sup over all sample pairs, periodic distance.

    local_constant = max over x != y of |g(x)-g(y)| * log(e + 1/d(x, y)).
    The scan is exact on the grid; rows are processed in chunks so the 2-D
    default grid stays within memory.
    """
    if g.grid != grid:
        raise DomainError("exponent field lives on a different grid")
    if grid.npoints < 2:
        raise DomainError("log-Holder estimate needs at least 2 grid points")

    vals = g.samples.reshape(-1)
    coords = np.stack([np.broadcast_to(c, grid.shape).reshape(-1)
                       for c in grid.coords()], axis=1)
    L = grid.side
    npts = vals.size

    best = -1.0
    best_pair = (0, 1)
    for start in range(0, npts, chunk):
        stop = min(start + chunk, npts)
        dg = np.abs(vals[start:stop, None] - vals[None, :])
        d2 = np.zeros((stop - start, npts))
        for ax in range(grid.dim):
            dd = coords[start:stop, ax, None] - coords[None, :, ax]
            dd = (dd + L / 2.0) % L - L / 2.0
            d2 += dd * dd
        dist = np.sqrt(d2)
        np.fill_diagonal(dist[:, start:stop], np.inf)
        prod = dg * _log_weight(np.where(dist > 0, dist, np.inf))
        k = int(np.argmax(prod))
        i, j = divmod(k, npts)
        if prod[i, j] > best:
            best = float(prod[i, j])
            best_pair = (start + i, j)

    pair = (tuple(coords[best_pair[0]]), tuple(coords[best_pair[1]]))
    report = LogHolderReport(local_constant=max(best, 0.0),
                             decay_constant=None,
                             witness_pairs=[pair])

    if g.decay_limit is not None:
        dist0 = grid.periodic_dist(np.zeros(grid.dim)).reshape(-1)
        decay = np.abs(vals - g.decay_limit) * np.log(np.e + dist0)
        k = int(np.argmax(decay))
        report.decay_constant = float(decay[k])
        report.decay_witness = tuple(coords[k])
    return report


def _cached_log_holder(g: ExponentField) -> LogHolderReport:
    if g._log_holder_cache is None:
        g._log_holder_cache = estimate_log_holder(g, g.grid)
    return g._log_holder_cache


def conjugate_exponent(p: ExponentField) -> ExponentField:
    """Pointwise 1/p + 1/p' = 1 with p = 1 mapped to the capped sentinel."""
    if p.inf_value < 1.0 - 1e-12:
        raise DomainError(f"conjugate needs p >= 1, got p^- = {p.inf_value}")
    s = np.maximum(p.samples, 1.0)
    with np.errstate(divide="ignore"):
        conj = np.where(s > 1.0, s / (s - 1.0), np.inf)
    conj = np.minimum(conj, P_CAP)
    decay = None
    if p.decay_limit is not None:
        d = max(float(p.decay_limit), 1.0)
        decay = min(d / (d - 1.0), P_CAP) if d > 1.0 else P_CAP
    return ExponentField(conj, p.role, p.grid, decay)


def classify(p: ExponentField) -> dict:
    """Empirical class flags {in_P0, in_P, in_Plog} for the exponent."""
    in_p0 = p.inf_value >= P0_FLOOR
    in_p = p.inf_value >= 1.0
    in_plog = False
    if in_p and p.decay_limit is not None:
        recip = ExponentField(1.0 / np.maximum(p.samples, P0_FLOOR),
                              "tau", p.grid, 1.0 / max(p.decay_limit, P0_FLOOR))
        rep = estimate_log_holder(recip, p.grid)
        in_plog = rep.local_constant <= LOG_HOLDER_THRESHOLD
    return {"in_P0": bool(in_p0), "in_P": bool(in_p), "in_Plog": bool(in_plog)}
