"""JSON I/O for the value types used across the package.

Schemas:
    polynomial  {"coeffs": [[re, im], ...], "basis": "chebyshev-monomial-dual"}
    phases      {"thetas": [...], "phis": [...], "lambda": x, "degree": d}
    matrix      {"rows": R, "cols": C, "data": [[re, im], ...]} row-major
    encoding    {"U": matrix, "Pi_L": matrix, "Pi_R": matrix, "alpha": a}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .encodings import ProjectedUnitaryEncoding
from .phases import PhaseFactors
from .polynomials import PolyCoeffs

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "save_json",
    "load_json",
    "poly_from_file",
    "poly_to_file",
    "phases_from_file",
    "phases_to_file",
    "matrix_from_file",
    "matrix_to_file",
    "encoding_from_json",
]


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[float(v.real), float(v.imag)] for v in m.ravel()],
    }


def matrix_from_json(d: dict) -> np.ndarray:
    rows, cols = int(d["rows"]), int(d["cols"])
    data = np.array([complex(re, im) for re, im in d["data"]])
    if data.size != rows * cols:
        raise ValueError(
            f"matrix data length {data.size} != rows*cols {rows * cols}")
    return data.reshape(rows, cols)


def save_json(obj: dict, path: str | Path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def poly_from_file(path: str | Path) -> PolyCoeffs:
    return PolyCoeffs.from_json_dict(load_json(path))


def poly_to_file(c: PolyCoeffs, path: str | Path):
    save_json(c.to_json_dict(), path)


def phases_from_file(path: str | Path) -> PhaseFactors:
    return PhaseFactors.from_json_dict(load_json(path))


def phases_to_file(ph: PhaseFactors, path: str | Path):
    save_json(ph.to_json_dict(), path)


def matrix_from_file(path: str | Path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def matrix_to_file(m: np.ndarray, path: str | Path):
    save_json(matrix_to_json(m), path)


def encoding_from_json(d: dict) -> ProjectedUnitaryEncoding:
    return ProjectedUnitaryEncoding(
        matrix_from_json(d["U"]),
        matrix_from_json(d["Pi_L"]),
        matrix_from_json(d["Pi_R"]),
        float(d["alpha"]),
    )
