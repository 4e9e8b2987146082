"""JSON wire formats for frames, matrices, vectors, Kraus sets, composite
states and outcome counts.

Complex scalars are encoded as two-element [re, im] arrays; real matrices
are row-major arrays of arrays. Frame files use the ``.frame.json``
extension and D-matrix files ``.dmat.json`` by convention.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DimensionError, GptError
from .frames import FiducialFrame, canonical_labels, label_text


def complex_to_json(array: np.ndarray) -> list:
    """Encode a complex array as nested lists with [re, im] leaves."""
    array = np.asarray(array, dtype=complex)
    paired = np.stack([array.real, array.imag], axis=-1)
    return paired.tolist()


def complex_from_json(data: Any) -> np.ndarray:
    """Decode nested lists with [re, im] leaves into a complex array."""
    paired = np.asarray(data, dtype=float)
    if paired.shape[-1] != 2:
        raise GptError("complex entries must be [re, im] pairs")
    return paired[..., 0] + 1j * paired[..., 1]


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def frame_to_dict(frame: FiducialFrame) -> dict:
    return {
        "dimension": frame.dimension,
        "k": frame.k,
        "ordering": "basis-then-pairs-x-before-y",
        "labels": [label_text(lab) for lab in frame.labels],
        "projectors": complex_to_json(frame.projectors),
    }


def frame_from_dict(payload: dict) -> FiducialFrame:
    n = int(payload["dimension"])
    projectors = complex_from_json(payload["projectors"])
    if projectors.shape != (n * n, n, n):
        raise DimensionError(
            f"frame payload has projector shape {projectors.shape}, expected ({n * n}, {n}, {n})"
        )
    frame = FiducialFrame(dimension=n, projectors=projectors, labels=canonical_labels(n))
    frame.validate()
    return frame


def dmatrix_to_dict(d: np.ndarray, dimension: int) -> dict:
    d = np.asarray(d, dtype=float)
    return {"dimension": dimension, "k": d.shape[0], "matrix": d.tolist()}


def dmatrix_from_dict(payload: dict) -> np.ndarray:
    d = np.asarray(payload["matrix"], dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionError(f"D matrix payload must be square, got {d.shape}")
    return d


def vector_to_dict(values: np.ndarray, dimension: int, role: str, kind: str) -> dict:
    """Header {dimension, K, role} plus a flat value array; ``kind`` says
    whether the values are fiducial probabilities (p) or coefficients (r)."""
    values = np.asarray(values, dtype=float)
    return {
        "dimension": dimension,
        "k": values.shape[0],
        "role": role,
        "kind": kind,
        "values": values.tolist(),
    }


def vector_from_dict(payload: dict) -> tuple[np.ndarray, int, str, str]:
    values = np.asarray(payload["values"], dtype=float)
    if values.ndim != 1 or values.shape[0] != int(payload["k"]):
        raise DimensionError("vector payload length does not match its header")
    return values, int(payload["dimension"]), str(payload["role"]), str(payload["kind"])


def operator_to_dict(matrix: np.ndarray) -> dict:
    matrix = np.asarray(matrix, dtype=complex)
    return {"dimension": matrix.shape[0], "matrix": complex_to_json(matrix)}


def operator_from_dict(payload: dict) -> np.ndarray:
    matrix = complex_from_json(payload["matrix"])
    n = int(payload["dimension"])
    if matrix.shape != (n, n):
        raise DimensionError(f"operator payload has shape {matrix.shape}, header says {n}")
    return matrix


def kraus_to_dict(operators: np.ndarray) -> dict:
    operators = np.asarray(operators, dtype=complex)
    return {"dimension": operators.shape[1], "kraus": complex_to_json(operators)}


def kraus_from_dict(payload: dict) -> np.ndarray:
    ops = complex_from_json(payload["kraus"])
    if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
        raise DimensionError(f"Kraus payload must be a list of square matrices, got {ops.shape}")
    return ops


def composite_to_dict(pt: np.ndarray) -> dict:
    pt = np.asarray(pt, dtype=float)
    return {"k_a": pt.shape[0], "k_b": pt.shape[1], "rows": pt.tolist()}


def composite_from_dict(payload: dict) -> np.ndarray:
    pt = np.asarray(payload["rows"], dtype=float)
    if pt.shape != (int(payload["k_a"]), int(payload["k_b"])):
        raise DimensionError("composite payload shape does not match its header")
    return pt


def counts_to_dict(counts: np.ndarray, shots: int, seed: int) -> dict:
    """Outcome counts with the null outcome always at index 0."""
    return {"shots": shots, "seed": seed, "counts": [int(c) for c in np.asarray(counts)]}
