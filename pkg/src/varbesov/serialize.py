"""File formats: grid functions (raw binary / CSV), coefficients, atoms."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .atoms import AtomSpec
from .grid import DomainError, DyadicCube, Grid, GridFunction
from .sequences import SequenceCoeffs

__all__ = [
    "write_function",
    "read_function",
    "write_coeffs",
    "read_coeffs",
    "write_atoms",
    "read_atoms",
]


def write_function(f: GridFunction, path: str) -> None:
    """Complex samples in row-major order: raw complex128 or re/im CSV."""
    p = Path(path)
    if p.suffix == ".csv":
        flat = f.values.reshape(-1)
        np.savetxt(p, np.column_stack([flat.real, flat.imag]),
                   delimiter=",", header="re,im", comments="")
    else:
        f.values.astype(np.complex128).tofile(p)


def read_function(path: str, grid: Grid) -> GridFunction:
    p = Path(path)
    if p.suffix == ".csv":
        data = np.loadtxt(p, delimiter=",", skiprows=1)
        data = np.atleast_2d(data)
        flat = data[:, 0] + 1j * data[:, 1]
    else:
        flat = np.fromfile(p, dtype=np.complex128)
    if flat.size != grid.npoints:
        raise DomainError(
            f"file holds {flat.size} samples, grid needs {grid.npoints}")
    return GridFunction(flat.reshape(grid.shape), grid)


def write_coeffs(coeffs: SequenceCoeffs, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(coeffs.to_json(), fh, indent=1)


def read_coeffs(path: str, grid: Grid) -> SequenceCoeffs:
    with open(path) as fh:
        items = json.load(fh)
    return SequenceCoeffs.from_json(items, grid)


def write_atoms(atoms: list, path: str) -> None:
    """Atoms as one npz archive: cube address plus sample payload each."""
    arrays = {}
    meta = []
    for i, a in enumerate(atoms):
        arrays[f"atom_{i}"] = a.samples.values
        meta.append({"K": a.K, "L": a.L, "gamma": a.gamma,
                     "v": a.cube.v, "m": list(a.cube.m)})
    arrays["meta"] = np.array(json.dumps(meta))
    np.savez_compressed(path, **arrays)


def read_atoms(path: str, grid: Grid) -> list:
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        out = []
        for i, m in enumerate(meta):
            samples = GridFunction(data[f"atom_{i}"], grid)
            out.append(AtomSpec(K=int(m["K"]), L=int(m["L"]),
                                gamma=float(m["gamma"]),
                                cube=DyadicCube(int(m["v"]), tuple(m["m"])),
                                samples=samples))
    return out
