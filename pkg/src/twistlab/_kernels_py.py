"""Pure numpy versions of the compiled kernels (same signatures)."""

from __future__ import annotations

import numpy as np

_BATCH = 1 << 14


def _wnorm_rows(R: np.ndarray, p: float, w: np.ndarray) -> np.ndarray:
    if p == 2.0:
        return np.sqrt(np.sum(w * R * R, axis=1))
    if p == 1.0:
        return np.sum(w * np.abs(R), axis=1)
    return np.sum(w * np.abs(R) ** p, axis=1) ** (1.0 / p)


def kalton_peck_rows(Z, p, w):
    Z = np.array(Z, dtype=np.float64, copy=True, order="C")
    w = np.asarray(w, dtype=np.float64)
    nrm = _wnorm_rows(Z, p, w)
    a = np.abs(Z)
    with np.errstate(divide="ignore", invalid="ignore"):
        # log differences: the ratio can underflow for subnormal entries
        out = np.where(a > 0.0, Z * (np.log(a) - np.log(nrm)[:, None]), 0.0)
    out[nrm == 0.0] = Z[nrm == 0.0]
    return out


def kp_defects(X, E, p, w):
    X = np.ascontiguousarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    E = np.asarray(E, dtype=np.float64)
    KX = kalton_peck_rows(X, p, w)
    out = np.empty(E.shape[0])
    for start in range(0, E.shape[0], _BATCH):
        Eb = E[start:start + _BATCH]
        Z = Eb @ X
        S = Eb @ KX
        out[start:start + len(Eb)] = _wnorm_rows(kalton_peck_rows(Z, p, w) - S, p, w)
    return out


def kp_defects_exhaustive(X, p, w):
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if n > 30:
        raise ValueError("exhaustive enumeration limited to n <= 30")
    total = 1 << n
    bits = np.arange(n)
    out = np.empty(total)
    for start in range(0, total, _BATCH):
        idx = np.arange(start, min(total, start + _BATCH))
        E = np.where((idx[:, None] >> bits) & 1, -1, 1).astype(np.int8)
        out[start:start + len(idx)] = kp_defects(X, E, p, w)
    return out
