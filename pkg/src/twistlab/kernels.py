"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise (or when
``TWISTLAB_PURE_PYTHON=1``) the numpy implementations are used.
``BACKEND`` names the active choice.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("TWISTLAB_PURE_PYTHON", "") in ("1", "true", "yes"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _prep(X, w):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected a 2-D array of row vectors")
    if w is None:
        w = np.ones(X.shape[1])
    w = np.ascontiguousarray(w, dtype=np.float64)
    if w.shape != (X.shape[1],):
        raise ValueError("weight length does not match vector length")
    return X, w


def kalton_peck_rows(Z, p: float = 2.0, w=None, backend=None) -> np.ndarray:
    Z, w = _prep(Z, w)
    return (backend or _impl).kalton_peck_rows(Z, float(p), w)


def kp_defects(X, E, p: float = 2.0, w=None, backend=None) -> np.ndarray:
    X, w = _prep(X, w)
    E = np.ascontiguousarray(E, dtype=np.int8)
    if E.ndim != 2 or E.shape[1] != X.shape[0]:
        raise ValueError("sign matrix must have one column per input vector")
    return np.asarray((backend or _impl).kp_defects(X, E, float(p), w))


def kp_defects_exhaustive(X, p: float = 2.0, w=None, backend=None) -> np.ndarray:
    X, w = _prep(X, w)
    return np.asarray((backend or _impl).kp_defects_exhaustive(X, float(p), w))
