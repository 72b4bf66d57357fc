"""Sign-averaged additivity defects and the unitary gap experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import hadamard

from . import kernels
from .quasimaps import kalton_peck
from .vecspace import SpaceSpec, dlp, lp, norm

EXHAUSTIVE_LIMIT = 20


@dataclass
class NablaResult:
    value: float
    stderr: float
    n_patterns: int
    mode: str
    spread: float  # max - min over the patterns evaluated

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n_patterns": self.n_patterns,
                "mode": self.mode, "spread": self.spread}


def _patterns(n, mode, samples, seed):
    if mode == "exhaustive":
        idx = np.arange(1 << n)
        return np.where((idx[:, None] >> np.arange(n)) & 1, -1, 1).astype(np.int8)
    rng = np.random.default_rng(seed)
    return rng.choice(np.array([-1, 1], dtype=np.int8), size=(samples, n))


def nabla(X, psi: Callable | None = None, space: SpaceSpec | None = None, mode: str = "exhaustive",
          samples: int = 1 << 14, seed: int = 0, backend=None) -> NablaResult:
    """Average over signs of ``||psi(sum e_i x_i) - sum e_i psi(x_i)||``.

    ``X`` holds the vectors as rows.  ``psi=None`` means the Kalton-Peck map
    of ``space`` (default: unweighted ``ell_2``), which runs on the compiled
    kernel.  Monte-Carlo mode reports the standard error of the mean.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, dim = X.shape
    space = space or lp(dim, 2.0)
    if mode not in ("exhaustive", "monte_carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" and n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive averaging is limited to n <= {EXHAUSTIVE_LIMIT}")
    if psi is None:
        w = space.weight_array() if space.kind != "DiscretizedLp" else np.full(dim, 1.0 / dim)
        if mode == "exhaustive":
            vals = kernels.kp_defects_exhaustive(X, space.p, w, backend=backend)
        else:
            vals = kernels.kp_defects(X, _patterns(n, mode, samples, seed), space.p, w, backend=backend)
    else:
        PX = np.array([psi(x) if np.any(x) else np.zeros(dim) for x in X])
        vals = []
        for e in _patterns(n, mode, samples, seed):
            s = e @ X
            out = psi(s) if np.any(s) else np.zeros(dim)
            vals.append(norm(space, out - e @ PX))
        vals = np.asarray(vals)
    k = vals.size
    se = float(vals.std(ddof=1) / math.sqrt(k)) if mode == "monte_carlo" and k > 1 else 0.0
    return NablaResult(float(vals.mean()), se, k, mode, float(vals.max() - vals.min()))


def canonical_value(n: int) -> float:
    """Closed form for the canonical basis of ``ell_2^n``: ``sqrt(n) log(n) / 2``."""
    return 0.5 * math.sqrt(n) * math.log(n)


def walsh_family(m: int) -> np.ndarray:
    """Rows of ``2^(-m/2) H`` with ``H`` the Sylvester-Hadamard matrix of order ``2^m``."""
    n = 1 << m
    return hadamard(n).astype(float) / math.sqrt(n)


def unitary_gap_experiment(ms, mode: str = "auto", samples: int = 1 << 14, seed: int = 0,
                           exhaustive_max: int = 16) -> list[dict]:
    """Rows ``(n, canonical, walsh, gap, stderr)`` for ``n = 2^m``.

    The orthogonal map sending ``e_i`` to the ``i``-th Walsh vector leaves
    the canonical value unchanged for ``u K``, so the gap measures how far
    ``K`` is from commuting with it.
    """
    rows = []
    for m in ms:
        n = 1 << m
        md = mode if mode != "auto" else ("exhaustive" if n <= exhaustive_max else "monte_carlo")
        can = nabla(np.eye(n), mode=md, samples=samples, seed=seed)
        wal = nabla(walsh_family(m), mode=md, samples=samples, seed=seed)
        rows.append({"m": m, "n": n, "nabla_canonical": can.value, "nabla_walsh": wal.value,
                     "gap": can.value - wal.value, "stderr": wal.stderr, "mode": md,
                     "canonical_spread": can.spread})
    return rows


def conjugated_nabla(X, U) -> float:
    """``nabla`` of ``U K`` at ``X``; equals that of ``K`` for orthogonal ``U``."""
    U = np.asarray(U, dtype=float)
    sp = lp(U.shape[0])
    return nabla(X, psi=lambda v: U @ kalton_peck(sp, v), space=sp).value


def l2_reduction_check(m: int, coeffs) -> dict:
    """Disjoint normalized indicators ``f_i = 2^(m/2) 1_{cell i}`` at level ``m``.

    ``K_{L2}(sum a_i f_i) = sum K_{l2}(a)_i f_i + (m/2) log 2 sum a_i f_i``;
    returns the max residual of that identity and of the linearity of the
    correction term over the sampled coefficient vectors.
    """
    X = dlp(m, 2.0)
    s = 2.0 ** (m / 2)
    shift = 0.5 * m * math.log(2.0)
    res, lin = 0.0, 0.0
    coeffs = [np.asarray(a, dtype=float) for a in coeffs]

    def corr(a):
        f = s * a
        return kalton_peck(X, f) - s * kalton_peck(lp(a.size), a)

    for a in coeffs:
        r = corr(a) - shift * s * a
        res = max(res, float(np.max(np.abs(r))) / max(1.0, float(np.max(np.abs(s * a)))))
    for a, b in zip(coeffs, coeffs[1:]):
        d = corr(a + b) - corr(a) - corr(b)
        lin = max(lin, float(np.max(np.abs(d))) / max(1.0, float(np.max(np.abs(s * (a + b))))))
    return {"residual": res, "linearity_residual": lin, "shift": shift}
