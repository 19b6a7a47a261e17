"""Numerical toolkit for Besov-type spaces with variable exponents.

Implements variable-exponent modulars and Luxemburg norms, the mixed
sequence norm, dyadic analysis on a periodic grid, a discrete phi-transform
with exact reconstruction, the associated sequence-space and Besov-type
quasi-norms, smooth atomic decomposition, and a verification harness that
turns the supporting lemmas and embeddings into empirical ratio checks.
"""

from .grid import (
    DomainError,
    DyadicCube,
    Grid,
    GridFunction,
    cube_geometry,
    cubes_in_window,
    default_grid,
    indicator,
    restrict,
)
from .exponents import (
    P_CAP,
    ExponentField,
    LogHolderReport,
    bump_field,
    classify,
    conjugate_exponent,
    constant_field,
    estimate_log_holder,
    exponent_from_json,
    ramp_field,
)
from .norms import (
    BracketError,
    NormResult,
    luxemburg_norm,
    mixed_modular,
    mixed_norm,
    modular,
    tilde_norm,
    unit_ball_check,
)
from .kernels import EtaKernel, convolve, cube_average, eta_evaluate, hl_maximal
from .transform import TransformPair, analyze, band_project, build_pair, synthesize
from .sequences import (
    SequenceCoeffs,
    SpaceParams,
    b_norm,
    coeff_bound_ratio,
    lambda_star,
    smooth_levels,
)
from .besov import (
    besov_norm,
    besov_norm_peetre,
    besov_norm_sharp,
    besov_norm_shifted,
    holder_growth_check,
    peetre_maximal,
)
from .atoms import (
    AtomSpec,
    AtomWindow,
    atomize,
    fj_decay_check,
    kl_requirements,
    make_atom_window,
    synthesize_atoms,
    validate_atom,
)

__version__ = "0.1.0"
