"""JSON file format for curvature tensors.

A file holds::

    {"dim": m, "signature": [p, q], "gram": [[...]],
     "components": [[i, j, k, l, value], ...]}

Indices are 0-based. Only non-zero entries need to be listed; entries
forced by the pair swap and the antisymmetries are filled in on load, and
the result can then be checked with :func:`~weyl_spectra.curvature.validate`.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .curvature import CurvatureTensor, symmetrize
from .linalg import InnerProduct, Signature


class TensorFormatError(ValueError):
    """Raised for files that cannot be turned into a tensor at all."""


def tensor_from_dict(doc: dict, complete: bool = True) -> CurvatureTensor:
    try:
        m = int(doc["dim"])
        p, q = (int(a) for a in doc["signature"])
        gram = np.array(doc.get("gram", np.diag([-1.0] * p + [1.0] * q)), dtype=float)
        entries = doc["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorFormatError(f"malformed tensor document: {exc}") from None
    if p + q != m:
        raise TensorFormatError(f"signature ({p}, {q}) does not add up to dim {m}")
    if gram.shape != (m, m):
        raise TensorFormatError(f"gram must be {m}x{m}, got shape {gram.shape}")
    try:
        space = InnerProduct.from_gram(gram, Signature(p, q))
    except ValueError as exc:
        raise TensorFormatError(str(exc)) from None
    C = np.zeros((m,) * 4)
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 5:
            raise TensorFormatError(f"component entries are [i, j, k, l, value], got {entry!r}")
        *idx, value = entry
        if not all(isinstance(i, int) and 0 <= i < m for i in idx):
            raise TensorFormatError(f"index out of range in {entry!r}")
        C[tuple(idx)] = float(value)
    return CurvatureTensor(symmetrize(C) if complete else C, space)


def tensor_to_dict(A: CurvatureTensor, tol: float = 0.0) -> dict:
    """Serialize ``A``; entries with magnitude ``<= tol`` are dropped."""
    if np.iscomplexobj(A.components):
        raise ValueError("only real tensors can be serialized")
    entries = [
        [int(i), int(j), int(k), int(l), float(A.components[i, j, k, l])]
        for i, j, k, l in zip(*np.nonzero(np.abs(A.components) > tol))
    ]
    return {
        "dim": A.m,
        "signature": [A.space.signature.p, A.space.signature.q],
        "gram": A.space.gram.tolist(),
        "components": entries,
    }


def load_tensor(path, complete: bool = True) -> CurvatureTensor:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise TensorFormatError(f"{path}: expected a JSON object")
    return tensor_from_dict(doc, complete)


def save_tensor(A: CurvatureTensor, path, tol: float = 0.0) -> None:
    Path(path).write_text(json.dumps(tensor_to_dict(A, tol), indent=1) + "\n")
