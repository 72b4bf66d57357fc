"""Homogeneous and quasi-linear maps, the Kalton-Peck map, twisted sums.

Constant estimators return :class:`Estimate` objects: the value is the
largest sampled ratio, a certified *lower* bound on the true constant,
never a claimed supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .vecspace import DimensionError, SpaceSpec, as_vector, norm

LINEARITY_TAGS = ("linear", "quasilinear", "unknown")


@dataclass(frozen=True)
class HomogeneousMap:
    """A positively homogeneous map ``domain -> codomain``.

    ``Omega(0) = 0`` is enforced by :meth:`__call__`.
    """

    apply: Callable[[np.ndarray], np.ndarray]
    domain: SpaceSpec | None = None
    codomain: SpaceSpec | None = None
    linearity_tag: str = "unknown"
    name: str = ""

    def __post_init__(self):
        if self.linearity_tag not in LINEARITY_TAGS:
            raise ValueError(f"bad linearity tag {self.linearity_tag!r}")

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y)
        if not np.any(y):
            return np.zeros_like(y, dtype=np.result_type(y, float))
        return np.asarray(self.apply(y))

    @property
    def is_linear(self) -> bool:
        return self.linearity_tag == "linear"

    def __add__(self, other: "HomogeneousMap") -> "HomogeneousMap":
        tag = "linear" if self.is_linear and other.is_linear else "unknown"
        return HomogeneousMap(lambda y: self(y) + other(y), self.domain, self.codomain, tag,
                              f"({self.name}+{other.name})")

    def __sub__(self, other: "HomogeneousMap") -> "HomogeneousMap":
        tag = "linear" if self.is_linear and other.is_linear else "unknown"
        return HomogeneousMap(lambda y: self(y) - other(y), self.domain, self.codomain, tag,
                              f"({self.name}-{other.name})")

    def __neg__(self) -> "HomogeneousMap":
        return HomogeneousMap(lambda y: -self(y), self.domain, self.codomain, self.linearity_tag,
                              f"-{self.name}")

    def scaled(self, c: float) -> "HomogeneousMap":
        return HomogeneousMap(lambda y: c * self(y), self.domain, self.codomain, self.linearity_tag,
                              f"{c}*{self.name}")

    def matrix(self, n: int | None = None) -> np.ndarray:
        """Matrix of a linear map, assembled column by column."""
        if n is None:
            if self.domain is None or self.domain.dim is None:
                raise ValueError("dimension unknown; pass n")
            n = self.domain.dim
        cols = [self(np.eye(n)[:, j]) for j in range(n)]
        return np.column_stack(cols)


def linear_map(M, domain=None, codomain=None, name: str = "L") -> HomogeneousMap:
    M = np.asarray(M)
    return HomogeneousMap(lambda y: M @ y, domain, codomain, "linear", name)


def zero_map(domain=None, codomain=None) -> HomogeneousMap:
    def _zero(y):
        n = codomain.dim if codomain is not None and codomain.dim is not None else len(y)
        return np.zeros(n)
    return HomogeneousMap(_zero, domain, codomain, "linear", "0")


def kalton_peck(space: SpaceSpec, x) -> np.ndarray:
    """``K(x)_k = x_k log(|x_k| / ||x||)`` with ``0 log 0 = 0``."""
    x = as_vector(x, complex_ok=True)
    if np.isinf(space.p):
        raise ValueError("the Kalton-Peck map needs a finite exponent")
    nx = norm(space, x)
    if nx == 0.0:
        raise ValueError("the Kalton-Peck map is undefined at 0")
    a = np.abs(x)
    out = np.zeros_like(x)
    nz = a > 0
    out[nz] = x[nz] * (np.log(a[nz]) - np.log(nx))  # the ratio can underflow
    return out


def kalton_peck_map(space: SpaceSpec) -> HomogeneousMap:
    return HomogeneousMap(lambda y: kalton_peck(space, y), space, space, "quasilinear", "K")


def kalton_peck_batch(space: SpaceSpec, Y) -> np.ndarray:
    """Row-wise K for real vectors (uses the compiled kernel when available)."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if space.kind == "DiscretizedLp":
        w = np.full(Y.shape[1], 1.0 / Y.shape[1])
    elif space.kind == "WeightedLp":
        w = space.weight_array()
    else:
        raise ValueError("the Kalton-Peck map needs a finite exponent")
    return kernels.kalton_peck_rows(Y, space.p, w)


@dataclass(frozen=True)
class TwistedSum:
    X: SpaceSpec
    Y: SpaceSpec
    omega: HomogeneousMap


def twisted_norm(ts: TwistedSum, x, y) -> float:
    """Quasi-norm ``||x - Omega y||_X + ||y||_Y``."""
    x = as_vector(x, complex_ok=True)
    y = as_vector(y, complex_ok=True)
    if ts.Y.kind != "DiscretizedLp" and ts.Y.dim != y.size:
        raise DimensionError("y does not live in Y")
    oy = ts.omega(y)
    if oy.shape != x.shape:
        raise DimensionError("x and Omega(y) have different lengths")
    return norm(ts.X, x - oy) + norm(ts.Y, y)


@dataclass
class Estimate:
    """A sampled lower bound with its provenance."""

    value: float
    seed: int | None
    n_samples: int
    argmax_sample: object = None
    meta: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        arg = self.argmax_sample
        if isinstance(arg, tuple):
            arg = [np.asarray(a).tolist() for a in arg]
        elif isinstance(arg, np.ndarray):
            arg = arg.tolist()
        return {"seed": self.seed, "n_samples": self.n_samples, "max_ratio": self.value,
                "argmax_sample": arg, **self.meta}


def gaussian_pairs(n: int, count: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    return [(rng.standard_normal(n), rng.standard_normal(n)) for _ in range(count)]


def zero_sum_tuples(n: int, size: int, count: int, seed: int) -> list[list[np.ndarray]]:
    """Tuples of ``size`` vectors summing to zero: ``size-1`` Gaussians and minus their sum."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        ys = [rng.standard_normal(n) for _ in range(size - 1)]
        ys.append(-np.sum(ys, axis=0))
        out.append(ys)
    return out


def quasilinearity_constant(omega: HomogeneousMap, X: SpaceSpec, Y: SpaceSpec,
                            sampler: Iterable[tuple[np.ndarray, np.ndarray]],
                            seed: int | None = None) -> Estimate:
    best, arg, count = 0.0, None, 0
    for y, y2 in sampler:
        count += 1
        den = norm(Y, y) + norm(Y, y2)
        if den == 0.0:
            continue
        r = norm(X, omega(y + y2) - omega(y) - omega(y2)) / den
        if r > best:
            best, arg = r, (y, y2)
    return Estimate(best, seed, count, arg)


def zero_linearity_constant(omega: HomogeneousMap, X: SpaceSpec, Y: SpaceSpec,
                            tuple_sampler: Iterable[Sequence[np.ndarray]],
                            seed: int | None = None, tol: float = 1e-9) -> Estimate:
    best, arg, count = 0.0, None, 0
    for ys in tuple_sampler:
        ys = [np.asarray(y, dtype=float) for y in ys]
        total = np.sum(ys, axis=0)
        scale = sum(norm(Y, y) for y in ys)
        if scale == 0.0:
            continue
        if norm(Y, total) > tol * scale:
            raise ValueError("0-linearity samples must sum to zero")
        count += 1
        r = norm(X, np.sum([omega(y) for y in ys], axis=0)) / scale
        if r > best:
            best, arg = r, tuple(ys)
    return Estimate(best, seed, count, arg)
