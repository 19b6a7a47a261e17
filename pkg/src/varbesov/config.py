"""Configuration defaults, declared corpus bounds, config file loading."""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import Corpus, build_corpus
from .exponents import exponent_from_json
from .grid import DomainError, Grid, grid_from_json
from .sequences import SpaceParams

__all__ = ["DECLARED_BOUNDS", "DEFAULT_TOLERANCES", "default_config",
           "load_config", "ConfigError", "corpus_from_config",
           "space_params_from_json"]


class ConfigError(ValueError):
    """Malformed or inconsistent configuration input."""


# Declared corpus bands: each lemma/embedding check passes when its worst
# empirical ratio stays under the declared value (over it for the lower
# check).  Frozen from calibration sweeps on the default grids and seeds
# (observed: dhr 1.0, r_trick 8.8, dhhr beta 0.95, alm_hasto 1.8,
# key_estimate1 2.5, key_lemma 1.3, coeff_bound 1.1, lamda_equi 1.05,
# key_estimate 1.04, embeddings 0.6..1.05) with a margin of roughly 4x;
# they are echoed into every report so reruns are comparable.
DECLARED_BOUNDS = {
    "dhr": 4.0,
    "r_trick": 40.0,
    "dhhr_estimate": 0.2,        # lower bound on the feasible beta
    "alm_hasto": 8.0,
    "key_estimate1": 10.0,
    "key_lemma": 8.0,
    "coeff_bound": 8.0,
    "lamda_equi": 8.0,
    "key_estimate": 8.0,
    "embed_elem_q": 4.0,
    "embed_elem_alpha": 4.0,
    "embed_sobolev": 8.0,
    "embed_further": 8.0,
    "embed_sandwich_emd": 8.0,
}

DEFAULT_TOLERANCES = {
    "norm_rtol": 1e-10,
    "oracle_reduction": 1e-8,
    "calderon_residual": 1e-12,
    "reconstruction": 1e-8,
    "fd_tol": 0.05,
    "mom_tol": 1e-9,
}


def default_config() -> dict:
    return {
        "grid": {"dim": 1, "jmax": 3, "jfine": 7},
        "exponents": [],           # empty -> curated default sets
        "corpus": {"seed": 20240601, "size": 20, "n_sequences": 50},
        "tolerances": dict(DEFAULT_TOLERANCES),
        "bounds": dict(DECLARED_BOUNDS),
        "figures": True,
    }


def load_config(path: str | None) -> dict:
    cfg = default_config()
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            user = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    for key, val in user.items():
        if key in ("tolerances", "bounds", "corpus", "grid") and \
                isinstance(val, dict):
            cfg[key] = {**cfg.get(key, {}), **val}
        else:
            cfg[key] = val
    return cfg


def grid_from_config(cfg: dict) -> Grid:
    try:
        return grid_from_json(cfg["grid"])
    except (KeyError, DomainError) as exc:
        raise ConfigError(f"bad grid spec: {exc}") from exc


def space_params_from_json(grid: Grid, obj: dict) -> SpaceParams:
    try:
        return SpaceParams(
            exponent_from_json(grid, obj["alpha"], "smoothness"),
            exponent_from_json(grid, obj["tau"], "tau"),
            exponent_from_json(grid, obj["p"], "integrability"),
            exponent_from_json(grid, obj["q"], "summability"),
            window=tuple(obj["window"]) if "window" in obj else None,
        )
    except (KeyError, DomainError) as exc:
        raise ConfigError(f"bad exponent set: {exc}") from exc


def corpus_from_config(cfg: dict) -> Corpus:
    grid = grid_from_config(cfg)
    cc = cfg.get("corpus", {})
    corpus = build_corpus(grid, seed=int(cc.get("seed", 20240601)),
                          n_functions=int(cc.get("size", 20)),
                          n_sequences=int(cc.get("n_sequences", 50)))
    sets = [space_params_from_json(grid, obj) for obj in
            cfg.get("exponents", [])]
    if sets:
        corpus.exponent_sets = sets
    return corpus
