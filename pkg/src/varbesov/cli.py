"""Command line interface.

Exit codes: 0 all checks passed / operation succeeded, 1 a check or
validation failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from . import serialize
from .atoms import atomize, make_atom_window, synthesize_atoms, validate_atom
from .besov import (
    besov_norm,
    besov_norm_peetre,
    besov_norm_sharp,
    besov_norm_shifted,
)
from .checks import run_embedding, run_lemma_check, run_oracle_reduction
from .config import (
    ConfigError,
    corpus_from_config,
    grid_from_config,
    load_config,
    space_params_from_json,
)
from .exponents import exponent_from_json
from .grid import DomainError, grid_from_json
from .norms import NormResult, luxemburg_norm, mixed_norm, tilde_norm
from .reporting import emit_report
from .transform import analyze, build_pair, synthesize


def _norm_result_json(r: NormResult) -> dict:
    d = asdict(r)
    d["witness"] = {k: str(v) for k, v in r.witness.items()}
    return d


def _load_grid(args, cfg=None):
    if getattr(args, "grid", None):
        with open(args.grid) as fh:
            return grid_from_json(json.load(fh))
    if cfg is not None:
        return grid_from_config(cfg)
    raise ConfigError("no grid specified (use --grid grid.json)")


def _cmd_check(args) -> int:
    cfg = load_config(args.config)
    corpus = corpus_from_config(cfg)
    ids = args.id.split(",") if args.id else list(cfg["bounds"])
    reports = []
    for cid in ids:
        cid = cid.strip()
        if cid == "oracle_reduction":
            reports.append(run_oracle_reduction(
                corpus, {"tolerance": cfg["tolerances"]["oracle_reduction"]}))
        else:
            reports.append(run_lemma_check(
                cid, corpus, declared_bound=cfg["bounds"].get(cid)))
    if args.out:
        emit_report(reports, args.out, figures=cfg.get("figures", True))
    for r in reports:
        print(f"{r.check_id}: constant={r.empirical_constant:.6g} "
              f"bound={r.declared_bound:g} "
              f"{'PASS' if r.passed else 'FAIL'}")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_embed(args) -> int:
    cfg = load_config(args.config)
    corpus = corpus_from_config(cfg)
    ids = args.id.split(",") if args.id else \
        ["elem_q", "elem_alpha", "sobolev", "further", "sandwich_emd"]
    reports = []
    for cid in ids:
        cid = cid.strip().removeprefix("embed_")
        reports.append(run_embedding(
            cid, corpus, declared_bound=cfg["bounds"].get("embed_" + cid)))
    if args.out:
        emit_report(reports, args.out, figures=cfg.get("figures", True))
    for r in reports:
        print(f"{r.check_id}: constant={r.empirical_constant:.6g} "
              f"{'PASS' if r.passed else 'FAIL'}")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_norm(args) -> int:
    cfg = load_config(args.config)
    grid = _load_grid(args, cfg)
    with open(args.exponents) as fh:
        exps = json.load(fh)
    tol = cfg["tolerances"]["norm_rtol"]
    if args.kind == "lp":
        f = serialize.read_function(args.function[0], grid)
        p = exponent_from_json(grid, exps["p"], "integrability")
        result = luxemburg_norm(f, p, tol)
    elif args.kind == "mixed":
        fs = [serialize.read_function(path, grid) for path in args.function]
        p = exponent_from_json(grid, exps["p"], "integrability")
        q = exponent_from_json(grid, exps["q"], "summability")
        result = mixed_norm(fs, p, q, tol)
    elif args.kind == "tilde":
        f = serialize.read_function(args.function[0], grid)
        p = exponent_from_json(grid, exps["p"], "integrability")
        tau = exponent_from_json(grid, exps["tau"], "tau")
        result = tilde_norm(f, p, tau, tol)
    elif args.kind == "besov":
        f = serialize.read_function(args.function[0], grid)
        sp = space_params_from_json(grid, exps)
        pair = build_pair(grid)
        if args.variant == "base":
            result = besov_norm(f, sp, pair, tol)
        elif args.variant == "sharp":
            result = besov_norm_sharp(f, sp, pair, tol)
        elif args.variant == "shifted":
            result = besov_norm_shifted(f, sp, pair, args.gamma, tol)
        else:
            result = besov_norm_peetre(f, sp, pair, args.peetre_a, tol)
    else:
        raise ConfigError(f"unknown norm kind {args.kind}")
    payload = _norm_result_json(result)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_atoms(args) -> int:
    cfg = load_config(args.config)
    grid = _load_grid(args, cfg)
    if args.action == "decompose":
        f = serialize.read_function(args.function, grid)
        pair = build_pair(grid)
        window = "dual" if args.exact_dual else \
            make_atom_window(args.K, args.L, args.window_radius)
        lam, atoms = atomize(f, pair, window, args.K, args.L)
        serialize.write_coeffs(lam, args.out_prefix + ".coeffs.json")
        serialize.write_atoms(atoms, args.out_prefix + ".atoms.npz")
        print(f"wrote {len(atoms)} atoms across {len(lam.levels())} levels")
        return 0
    if args.action == "synthesize":
        lam = serialize.read_coeffs(args.coeffs, grid)
        atoms = serialize.read_atoms(args.atoms, grid)
        f = synthesize_atoms(lam, atoms)
        serialize.write_function(f, args.out)
        print(f"wrote {args.out}")
        return 0
    if args.action == "validate":
        atoms = serialize.read_atoms(args.atoms, grid)
        all_ok = True
        reports = []
        for i, a in enumerate(atoms):
            rep = validate_atom(a, fd_tol=cfg["tolerances"]["fd_tol"],
                                mom_tol=cfg["tolerances"]["mom_tol"])
            reports.append({"atom": i, **rep})
            all_ok &= rep["pass"]
        print(json.dumps(reports, indent=1, default=float))
        return 0 if all_ok else 1
    raise ConfigError(f"unknown atoms action {args.action}")


def _cmd_phitransform(args) -> int:
    cfg = load_config(args.config)
    grid = _load_grid(args, cfg)
    pair = build_pair(grid)
    if args.action == "analyze":
        f = serialize.read_function(args.function, grid)
        coeffs = analyze(f, pair)
        serialize.write_coeffs(coeffs, args.out)
        print(f"wrote {args.out}")
        return 0
    if args.action == "synthesize":
        coeffs = serialize.read_coeffs(args.coeffs, grid)
        f = synthesize(coeffs, pair)
        serialize.write_function(f, args.out)
        print(f"wrote {args.out}")
        return 0
    raise ConfigError(f"unknown phitransform action {args.action}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="varbesov",
        description="Variable-exponent Besov-type space toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run lemma verification campaigns")
    c.add_argument("--id", help="comma-separated check ids (default: all)")
    c.add_argument("--config", help="config JSON")
    c.add_argument("--out", help="report output directory")
    c.set_defaults(func=_cmd_check)

    e = sub.add_parser("embed", help="run embedding experiments")
    e.add_argument("--id", help="comma-separated embedding ids")
    e.add_argument("--config")
    e.add_argument("--out")
    e.set_defaults(func=_cmd_embed)

    n = sub.add_parser("norm", help="compute a norm of a stored function")
    n.add_argument("--kind", required=True,
                   choices=["lp", "mixed", "tilde", "besov"])
    n.add_argument("--variant", default="base",
                   choices=["base", "sharp", "shifted", "peetre"])
    n.add_argument("--gamma", type=int, default=1)
    n.add_argument("--peetre-a", type=float, default=None)
    n.add_argument("--grid", help="grid JSON file")
    n.add_argument("--exponents", required=True, help="exponent JSON file")
    n.add_argument("--function", nargs="+", required=True,
                   help="function file(s): raw complex128 or CSV")
    n.add_argument("--config")
    n.add_argument("--out", help="NormResult JSON output path")
    n.set_defaults(func=_cmd_norm)

    a = sub.add_parser("atoms", help="atomic decomposition tools")
    a.add_argument("action", choices=["decompose", "synthesize", "validate"])
    a.add_argument("--grid")
    a.add_argument("--config")
    a.add_argument("--function")
    a.add_argument("--K", type=int, default=2)
    a.add_argument("--L", type=int, default=0)
    a.add_argument("--window-radius", type=float, default=1.0)
    a.add_argument("--exact-dual", action="store_true")
    a.add_argument("--coeffs")
    a.add_argument("--atoms")
    a.add_argument("--out")
    a.add_argument("--out-prefix", default="atomized")
    a.set_defaults(func=_cmd_atoms)

    p = sub.add_parser("phitransform", help="analysis/synthesis round trip")
    p.add_argument("action", choices=["analyze", "synthesize"])
    p.add_argument("--grid")
    p.add_argument("--config")
    p.add_argument("--function")
    p.add_argument("--coeffs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_phitransform)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, FileNotFoundError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
