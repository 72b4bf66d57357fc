"""Finite-dimensional normed spaces and exact norm evaluation.

Three kinds of space are modelled:

``WeightedLp``
    ``||x|| = (sum_k w_k |x_k|^p)^(1/p)``; for ``p = inf`` the norm is
    ``max_k w_k |x_k|``.
``Sup``
    ``max_k |x_k|`` (weights ignored).
``DiscretizedLp``
    ``L_p(0, 1)`` restricted to functions constant on the ``2**m`` dyadic
    cells of level ``m``; each cell has measure ``2**-m``.  The norm only
    depends on the cell measure, so refining a function (repeating each
    entry) leaves its norm unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

KINDS = ("WeightedLp", "Sup", "DiscretizedLp")


class DimensionError(ValueError):
    """Vector length does not match the space."""


def as_vector(x, complex_ok: bool = False) -> np.ndarray:
    """Coerce ``x`` to a 1-D float (or complex) array and check finiteness."""
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        if not complex_ok:
            raise TypeError("complex entries are not allowed here")
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError("a coordinate vector must be 1-D and non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinate vectors must have finite entries")
    return arr


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            return math.inf
        p = float(p)
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"exponent must lie in [1, inf], got {p}")
    return p


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    p: float = 2.0
    weights: tuple[float, ...] | None = None
    m: int | None = None
    n: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        object.__setattr__(self, "p", _parse_p(self.p))
        if self.kind == "WeightedLp":
            if self.weights is None:
                if self.n is None:
                    raise ValueError("WeightedLp needs weights or a dimension")
                object.__setattr__(self, "weights", (1.0,) * int(self.n))
            w = tuple(float(v) for v in self.weights)
            if any(not (v > 0.0) or not math.isfinite(v) for v in w):
                raise ValueError("weights must be strictly positive and finite")
            object.__setattr__(self, "weights", w)
            object.__setattr__(self, "n", len(w))
        elif self.kind == "DiscretizedLp":
            if self.m is None or int(self.m) < 0:
                raise ValueError("DiscretizedLp needs a grid level m >= 0")
            object.__setattr__(self, "m", int(self.m))
            object.__setattr__(self, "n", 1 << int(self.m))
        else:
            object.__setattr__(self, "p", math.inf)

    @property
    def dim(self) -> int | None:
        return self.n

    def weight_array(self) -> np.ndarray:
        """Weights in the form ``(sum_k w_k |x_k|^p)^(1/p)`` for finite p."""
        if self.kind == "WeightedLp":
            return np.asarray(self.weights)
        if self.kind == "DiscretizedLp":
            return np.full(self.n, 2.0 ** -self.m)
        raise ValueError("Sup spaces carry no weights")

    def at_dim(self, n: int) -> "SpaceSpec":
        """Same family of norm on dimension ``n`` (unit weights / refined grid)."""
        if self.kind == "Sup":
            return SpaceSpec("Sup", n=n)
        if self.kind == "DiscretizedLp":
            m = int(round(math.log2(n)))
            if 1 << m != n:
                raise DimensionError("discretized spaces need a power-of-two length")
            return SpaceSpec("DiscretizedLp", self.p, m=m)
        if n == self.n:
            return self
        return SpaceSpec("WeightedLp", self.p, weights=(1.0,) * n)

    def to_json(self) -> str:
        d = {"kind": self.kind, "p": "inf" if math.isinf(self.p) else self.p}
        if self.kind == "WeightedLp":
            d["weights"] = list(self.weights)
        if self.kind == "DiscretizedLp":
            d["m"] = self.m
        if self.kind == "Sup":
            d["n"] = self.n
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "SpaceSpec":
        d = json.loads(text)
        return cls(d["kind"], d.get("p", 2.0), weights=tuple(d["weights"]) if "weights" in d else None,
                   m=d.get("m"), n=d.get("n"))


def lp(n: int, p: float = 2.0, weights: Iterable[float] | None = None) -> SpaceSpec:
    """Shorthand for ``ell_p^n`` (optionally weighted)."""
    if weights is None:
        return SpaceSpec("WeightedLp", p, n=n)
    return SpaceSpec("WeightedLp", p, weights=tuple(weights))


def sup(n: int) -> SpaceSpec:
    return SpaceSpec("Sup", n=n)


def dlp(m: int, p: float = 2.0) -> SpaceSpec:
    """Discretized ``L_p(0, 1)`` at grid level ``m``."""
    return SpaceSpec("DiscretizedLp", p, m=m)


def weighted_lp_norm(x: np.ndarray, p: float, w: np.ndarray | None = None) -> float:
    """``(sum w |x|^p)^(1/p)``, or ``max w |x|`` at ``p = inf``; overflow-safe."""
    a = np.abs(x)
    if w is None:
        w = np.ones_like(a, dtype=float)
    if math.isinf(p):
        return float(np.max(w * a)) if a.size else 0.0
    if p == 2.0:
        return float(np.sqrt(np.sum(w * a * a)))
    if p == 1.0:
        return float(np.sum(w * a))
    scale = float(np.max(a)) if a.size else 0.0
    if scale == 0.0:
        return 0.0
    return scale * float(np.sum(w * (a / scale) ** p)) ** (1.0 / p)


def norm(space: SpaceSpec, x) -> float:
    """Exact norm of ``x`` in ``space``.

    DiscretizedLp spaces accept any power-of-two length ``2**j`` and read
    ``x`` as a level-``j`` step function, so the value does not depend on
    how finely a function is sampled.
    """
    x = as_vector(x, complex_ok=True)
    if space.kind == "DiscretizedLp":
        n = x.size
        if n & (n - 1):
            raise DimensionError("discretized L_p vectors need a power-of-two length")
        return weighted_lp_norm(x, space.p, np.full(n, 1.0 / n))
    if x.size != space.n:
        raise DimensionError(f"vector of length {x.size} in a space of dimension {space.n}")
    if space.kind == "Sup":
        return float(np.max(np.abs(x)))
    return weighted_lp_norm(x, space.p, np.asarray(space.weights))


def refine(x, factor: int) -> np.ndarray:
    """Repeat every cell ``factor`` times (a dyadic step function on a finer grid)."""
    return np.repeat(np.asarray(x), int(factor))


def align(*vectors) -> list[np.ndarray]:
    """Refine dyadic step functions to their common (finest) grid."""
    n = max(len(v) for v in vectors)
    out = []
    for v in vectors:
        if n % len(v):
            raise DimensionError("lengths are not dyadic refinements of each other")
        out.append(refine(v, n // len(v)))
    return out


def sum_norm(couple: tuple[SpaceSpec, SpaceSpec], x, solver_budget: int = 2000) -> float:
    """Upper bound for ``inf {||x0||_0 + ||x1||_1 : x0 + x1 = x}``.

    Subgradient descent on the splitting ``x0`` started from ``x/2``,
    with a diminishing step; the trivial splittings are always
    considered, so the result never exceeds ``min(||x||_0, ||x||_1)``.
    """
    s0, s1 = couple
    x = as_vector(x)
    if s0.dim is not None and s1.dim is not None and s0.dim != s1.dim:
        raise DimensionError("the two spaces of a couple must share a dimension")
    if solver_budget <= 0:
        raise ValueError("solver budget must be positive")

    def objective(x0):
        return norm(s0, x0) + norm(s1, x - x0)

    best = min(objective(np.zeros_like(x)), objective(x.copy()))
    x0 = 0.5 * x
    best = min(best, objective(x0))
    scale = max(float(np.max(np.abs(x))), 1e-300)
    h = 1e-7 * scale
    for k in range(1, solver_budget + 1):
        f0 = objective(x0)
        # one-sided finite-difference subgradient; norms are Lipschitz
        g = np.empty_like(x0)
        for i in range(x0.size):
            e = np.zeros_like(x0)
            e[i] = h
            g[i] = (objective(x0 + e) - f0) / h
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            break
        x0 = x0 - (0.5 * scale / math.sqrt(k)) * g / gn
        best = min(best, objective(x0))
    return float(best)
