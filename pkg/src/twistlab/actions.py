"""Concrete groups and semigroups acting on coordinate spaces, and derivations.

Conventions
-----------
* ``g.compose(h)`` is the element acting as ``g(h(x))``.
* A permutation ``perm`` sends ``e_i`` to ``e_perm[i]``.
* A :class:`DyadicLamperti` element acts on step functions on ``[0, 1)``
  by ``Tf = eps * w**(1/p) * (f o phi)`` with ``phi`` affine and increasing
  from each source piece ``J_j`` onto its target piece ``K_j`` and
  ``w = |K_j| / |J_j|``.  Vectors of length ``2**m`` are level-``m`` step
  functions; the image lives on the coarsest grid on which it is exactly
  representable, which may be finer than the input grid.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .quasimaps import Estimate, kalton_peck
from .vecspace import DimensionError, align, lp, norm

MAX_GRID_LEVEL = 22


class GridTooCoarse(ValueError):
    """The requested grid cannot represent the image of a Lamperti element."""


class ActionElement:
    kind = "abstract"
    is_isometry = False

    def apply(self, x) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x) -> np.ndarray:
        return self.apply(x)

    def compose(self, other: "ActionElement") -> "ActionElement":
        raise NotImplementedError

    def inverse(self) -> "ActionElement":
        raise NotImplementedError(f"{self.kind} elements have no inverse")

    def key(self):
        raise NotImplementedError

    def matrix(self, n: int) -> np.ndarray:
        return np.column_stack([self.apply(np.eye(n)[:, j]) for j in range(n)])

    def __eq__(self, other):
        return isinstance(other, ActionElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class Unit(ActionElement):
    """Signed permutation ``x -> eps * P x``."""

    is_isometry = True

    def __init__(self, eps, perm=None, kind: str = "Unit"):
        eps = np.asarray(eps, dtype=float)
        if eps.ndim != 1 or not np.all(np.abs(eps) == 1.0):
            raise ValueError("sign vectors must have entries +-1")
        n = eps.size
        perm = np.arange(n) if perm is None else np.asarray(perm, dtype=int)
        if sorted(perm.tolist()) != list(range(n)):
            raise ValueError("not a permutation of range(n)")
        self.eps, self.perm, self.kind = eps, perm, kind
        self.n = n

    def apply(self, x):
        x = np.asarray(x)
        if x.shape[0] != self.n:
            raise DimensionError("dimension mismatch")
        y = np.empty_like(x)
        y[self.perm] = x
        return self.eps.reshape((-1,) + (1,) * (x.ndim - 1)) * y

    def compose(self, other):
        if isinstance(other, Unit):
            pe = np.empty(self.n)
            pe[self.perm] = other.eps
            kind = self.kind if self.kind == other.kind else "Unit"
            return Unit(self.eps * pe, self.perm[other.perm], kind)
        return MatrixAction(self.matrix(self.n) @ other.matrix(self.n))

    def inverse(self):
        inv = np.argsort(self.perm)
        e = np.empty(self.n)
        e[inv] = self.eps
        return Unit(e, inv, self.kind)

    def key(self):
        return ("Unit", tuple(self.eps.astype(int)), tuple(self.perm))

    def __repr__(self):
        return f"{self.kind}(eps={self.eps.astype(int).tolist()}, perm={self.perm.tolist()})"

    def to_dict(self):
        return {"kind": self.kind, "eps": self.eps.astype(int).tolist(), "perm": self.perm.tolist()}


def sign_vector(eps) -> Unit:
    return Unit(eps, kind="SignVector")


def permutation(perm) -> Unit:
    perm = np.asarray(perm, dtype=int)
    return Unit(np.ones(perm.size), perm, kind="Permutation")


def identity(n: int) -> Unit:
    return Unit(np.ones(n), kind="SignVector")


def sign_group(n: int) -> list[Unit]:
    """All of ``{-1, 1}^n``."""
    if n > 20:
        raise ValueError("exhaustive sign groups are limited to n <= 20")
    return [sign_vector(e) for e in itertools.product((1.0, -1.0), repeat=n)]


def unit_group(n: int) -> list[Unit]:
    """Signs times permutations, ``2^n n!`` elements."""
    if n > 6:
        raise ValueError("the full unit group is enumerated only for n <= 6")
    return [Unit(e, p) for p in itertools.permutations(range(n))
            for e in itertools.product((1.0, -1.0), repeat=n)]


def random_unit(n: int, rng: np.random.Generator) -> Unit:
    return Unit(rng.choice([-1.0, 1.0], size=n), rng.permutation(n))


class MatrixAction(ActionElement):
    kind = "Matrix"

    def __init__(self, M, inverse_matrix=None, isometry: bool = False):
        self.M = np.asarray(M)
        self._inv = None if inverse_matrix is None else np.asarray(inverse_matrix)
        self.is_isometry = isometry

    def apply(self, x):
        return self.M @ np.asarray(x)

    def matrix(self, n=None):
        return self.M

    def compose(self, other):
        inv = None
        if self._inv is not None and isinstance(other, MatrixAction) and other._inv is not None:
            inv = other._inv @ self._inv
        return MatrixAction(self.M @ other.matrix(self.M.shape[1]), inv,
                            self.is_isometry and other.is_isometry)

    def inverse(self):
        inv = self._inv if self._inv is not None else np.linalg.inv(self.M)
        return MatrixAction(inv, self.M, self.is_isometry)

    def key(self):
        return ("Matrix", self.M.shape, tuple(np.round(self.M, 12).ravel()))


# ---------------------------------------------------------------------------
# Dyadic Lamperti isometries of discretized L_p(0, 1)


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v).limit_denominator(1 << 40)


def _dyadic_level(q: Fraction) -> int | None:
    d = q.denominator
    if d & (d - 1):
        return None
    return d.bit_length() - 1


def _check_tiling(pieces, label):
    ordered = sorted(pieces)
    pos = Fraction(0)
    for lo, hi in ordered:
        if lo != pos or hi <= lo:
            raise ValueError(f"{label} partition does not tile [0, 1)")
        pos = hi
    if pos != 1:
        raise ValueError(f"{label} partition does not tile [0, 1)")


@dataclass(frozen=True)
class DyadicLamperti(ActionElement):
    source: tuple
    target: tuple
    signs: tuple
    p: float = 2.0

    kind = "DyadicLamperti"
    is_isometry = True

    def __post_init__(self):
        src = tuple((_frac(a), _frac(b)) for a, b in self.source)
        tgt = tuple((_frac(a), _frac(b)) for a, b in self.target)
        if len(src) != len(tgt) or len(src) != len(self.signs):
            raise ValueError("source, target and signs must have one entry per piece")
        _check_tiling(src, "source")
        _check_tiling(tgt, "target")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        if not (1.0 <= float(self.p) < math.inf):
            raise ValueError("Lamperti isometries need 1 <= p < inf")
        order = sorted(range(len(src)), key=lambda j: src[j])
        object.__setattr__(self, "source", tuple(src[j] for j in order))
        object.__setattr__(self, "target", tuple(tgt[j] for j in order))
        object.__setattr__(self, "signs", tuple(int(self.signs[j]) for j in order))
        object.__setattr__(self, "p", float(self.p))

    # -- structure -------------------------------------------------------
    @property
    def piece_weights(self) -> tuple[Fraction, ...]:
        return tuple((d - c) / (b - a) for (a, b), (c, d) in zip(self.source, self.target))

    @property
    def max_abs_log_weight(self) -> float:
        return max(abs(math.log(w)) for w in self.piece_weights)

    def source_level(self) -> int:
        lv = [_dyadic_level(q) for piece in self.source for q in piece]
        if any(v is None for v in lv):
            raise GridTooCoarse("source partition has non-dyadic endpoints")
        return max(lv)

    def key(self):
        return ("DyadicLamperti", self.source, self.target, self.signs, self.p)

    def is_measure_preserving(self) -> bool:
        return all(w == 1 for w in self.piece_weights)

    # -- grid machinery --------------------------------------------------
    @functools.lru_cache(maxsize=64)
    def _index_map(self, m: int, M: int):
        """Input-cell ranges ``[lo, hi]`` read by each level-``M`` output cell, or None."""
        N = 1 << M
        lo = np.empty(N, dtype=np.int64)
        hi = np.empty(N, dtype=np.int64)
        gain = np.empty(N)
        sign = np.empty(N)
        for (a, b), (c, d), s in zip(self.source, self.target, self.signs):
            i0, i1 = a * N, b * N
            if i0.denominator != 1 or i1.denominator != 1:
                return None
            i0, i1 = int(i0), int(i1)
            w = (d - c) / (b - a)
            A = c * (1 << m)
            B = w * Fraction(1 << m, N)
            den = A.denominator * B.denominator
            if max(abs(A.numerator * B.denominator), B.numerator * A.denominator * (i1 - i0 + 1), den) > 1 << 62:
                raise GridTooCoarse("grid arithmetic would overflow")
            t = np.arange(i1 - i0, dtype=np.int64)
            top_lo = A.numerator * B.denominator + t * (B.numerator * A.denominator)
            top_hi = top_lo + B.numerator * A.denominator
            lo[i0:i1] = top_lo // den
            hi[i0:i1] = -((-top_hi) // den) - 1
            gain[i0:i1] = float(w) ** (1.0 / self.p)
            sign[i0:i1] = s
        return lo, hi, gain, sign

    def output_level(self, m: int) -> int:
        """Smallest level on which every level-``m`` step function has an exact image."""
        M0 = max(m, self.source_level())
        for M in range(M0, MAX_GRID_LEVEL + 1):
            mp = self._index_map(m, M)
            if mp is not None and np.all(mp[0] == mp[1]):
                return M
        raise GridTooCoarse(f"no grid up to level {MAX_GRID_LEVEL} resolves this element at input level {m}")

    def apply(self, x, out_level: int | None = None) -> np.ndarray:
        x = np.asarray(x)
        n = x.shape[0]
        m = n.bit_length() - 1
        if n != 1 << m:
            raise DimensionError("Lamperti elements act on vectors of length 2**m")
        if out_level is None:
            try:
                out_level = self.output_level(m)
            except GridTooCoarse:
                return self._apply_data_dependent(x, m)
        mp = self._index_map(m, out_level)
        if mp is None:
            raise GridTooCoarse(f"level {out_level} does not refine the source partition")
        lo, hi, gain, sign = mp
        if not np.all(lo == hi):
            # x is constant on [lo, hi] iff no neighbour change falls inside
            flat = x.reshape(x.shape[0], -1)
            change = np.concatenate([[0], np.cumsum(np.any(flat[1:] != flat[:-1], axis=1))])
            if np.any(change[hi] != change[lo]):
                raise GridTooCoarse(f"the image is not a step function at level {out_level}")
        shape = (-1,) + (1,) * (x.ndim - 1)
        return (sign * gain).reshape(shape) * x[lo]

    def _apply_data_dependent(self, x, m):
        try:
            M0 = max(m, self.source_level())
        except GridTooCoarse:
            raise GridTooCoarse("source partition is not dyadic; refine it") from None
        for M in range(M0, MAX_GRID_LEVEL + 1):
            try:
                return self.apply(x, out_level=M)
            except GridTooCoarse:
                continue
        raise GridTooCoarse("the image is not a dyadic step function on any admissible grid")

    def weight_vector(self, level: int) -> np.ndarray:
        """Radon-Nikodym derivative ``w`` of ``phi`` as a level-``level`` step function."""
        N = 1 << level
        w = np.empty(N)
        for (a, b), wj in zip(self.source, self.piece_weights):
            i0, i1 = a * N, b * N
            if i0.denominator != 1 or i1.denominator != 1:
                raise GridTooCoarse(f"level {level} does not refine the source partition")
            w[int(i0):int(i1)] = float(wj)
        return w

    # -- group structure -------------------------------------------------
    def compose(self, other: "DyadicLamperti") -> "DyadicLamperti":
        if not isinstance(other, DyadicLamperti):
            raise TypeError("can only compose Lamperti elements with each other")
        if other.p != self.p:
            raise ValueError("exponents differ")
        src, tgt, sg = [], [], []
        for (a, b), (c, d), s in zip(self.source, self.target, self.signs):
            wg = (d - c) / (b - a)
            for (a2, b2), (c2, d2), s2 in zip(other.source, other.target, other.signs):
                lo, hi = max(c, a2), min(d, b2)
                if hi <= lo:
                    continue
                wh = (d2 - c2) / (b2 - a2)
                src.append((a + (lo - c) / wg, a + (hi - c) / wg))
                tgt.append((c2 + (lo - a2) * wh, c2 + (hi - a2) * wh))
                sg.append(s * s2)
        return DyadicLamperti(tuple(src), tuple(tgt), tuple(sg), self.p)

    def inverse(self) -> "DyadicLamperti":
        return DyadicLamperti(self.target, self.source, self.signs, self.p)

    def simplified(self) -> "DyadicLamperti":
        """Merge adjacent pieces that continue the same affine map and sign."""
        src, tgt, sg = [list(self.source[0])], [list(self.target[0])], [self.signs[0]]
        for (a, b), (c, d), s in zip(self.source[1:], self.target[1:], self.signs[1:]):
            pa, pb = src[-1]
            pc, pd = tgt[-1]
            if a == pb and c == pd and s == sg[-1] and (d - c) / (b - a) == (pd - pc) / (pb - pa):
                src[-1][1], tgt[-1][1] = b, d
            else:
                src.append([a, b])
                tgt.append([c, d])
                sg.append(s)
        return DyadicLamperti(tuple(map(tuple, src)), tuple(map(tuple, tgt)), tuple(sg), self.p)

    def to_dict(self) -> dict:
        def ep(q: Fraction):
            lv = _dyadic_level(q)
            return [q.numerator, q.denominator] if lv is None else [q.numerator * (1 << lv) // q.denominator, lv]
        return {"kind": "DyadicLamperti", "p": self.p,
                "source": [[ep(a), ep(b)] for a, b in self.source],
                "target": [[ep(a), ep(b)] for a, b in self.target],
                "signs": list(self.signs)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DyadicLamperti":
        def ep(pair):
            k, lv = pair
            return Fraction(k, 1 << lv)
        return cls(tuple((ep(a), ep(b)) for a, b in d["source"]),
                   tuple((ep(a), ep(b)) for a, b in d["target"]),
                   tuple(d["signs"]), d["p"])

    @classmethod
    def from_json(cls, text: str) -> "DyadicLamperti":
        return cls.from_dict(json.loads(text))


def lamperti_identity(p: float = 2.0) -> DyadicLamperti:
    return DyadicLamperti(((0, 1),), ((0, 1),), (1,), p)


def lamperti_weight(g: DyadicLamperti, level: int) -> np.ndarray:
    return g.weight_vector(level)


def lamperti_chain(r: int, p: float = 2.0, signs=None) -> DyadicLamperti:
    """Element with ``max |log w| = r log 2``.

    Source pieces have lengths ``2^-(r+1), 2^-(r+1), 2^-r, ..., 1/2`` in that
    order; the targets use the same lengths in reverse order, so the first
    piece expands by ``2^r`` and the last contracts by ``2^-r``.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return lamperti_identity(p)
    lengths = [Fraction(1, 1 << (r + 1))] + [Fraction(1, 1 << j) for j in range(r + 1, 0, -1)]
    def cuts(ls):
        pos, out = Fraction(0), []
        for ell in ls:
            out.append((pos, pos + ell))
            pos += ell
        return out
    src = cuts(lengths)
    tgt = cuts(lengths[::-1])
    signs = signs if signs is not None else (1,) * len(src)
    return DyadicLamperti(tuple(src), tuple(tgt), tuple(signs), p)


def _random_dyadic_partition(rng: np.random.Generator, pieces: int, max_level: int):
    parts = [(Fraction(0), Fraction(1))]
    while len(parts) < pieces:
        splittable = [i for i, (a, b) in enumerate(parts) if b - a > Fraction(1, 1 << max_level)]
        if not splittable:
            break
        i = splittable[rng.integers(len(splittable))]
        a, b = parts.pop(i)
        mid = (a + b) / 2
        parts[i:i] = [(a, mid), (mid, b)]
    return parts


def random_dyadic_lamperti(rng: np.random.Generator, p: float = 2.0, pieces: int = 4,
                           max_level: int = 4, signed: bool = True) -> DyadicLamperti:
    """Random element whose pieces are dyadic intervals (so every weight is a power of 2)."""
    src = _random_dyadic_partition(rng, pieces, max_level)
    tgt = _random_dyadic_partition(rng, len(src), max_level)
    k = min(len(src), len(tgt))
    while len(src) != len(tgt):
        # equalize piece counts by splitting the coarser side further
        if len(src) < len(tgt):
            src = _random_dyadic_partition(rng, len(tgt), max_level + 4)
        else:
            tgt = _random_dyadic_partition(rng, len(src), max_level + 4)
        k = len(src)
    perm = rng.permutation(k)
    signs = rng.choice([-1, 1], size=k) if signed else np.ones(k, dtype=int)
    return DyadicLamperti(tuple(src), tuple(tgt[j] for j in perm), tuple(int(s) for s in signs), p)


def random_measure_preserving(rng: np.random.Generator, p: float = 2.0, level: int = 2) -> DyadicLamperti:
    """Random signed rearrangement of the level-``level`` cells (``w = 1``)."""
    N = 1 << level
    cells = [(Fraction(i, N), Fraction(i + 1, N)) for i in range(N)]
    perm = rng.permutation(N)
    signs = rng.choice([-1, 1], size=N)
    return DyadicLamperti(tuple(cells), tuple(cells[j] for j in perm), tuple(int(s) for s in signs), p)


def lamperti_derivation(g: DyadicLamperti) -> Callable[[np.ndarray], np.ndarray]:
    """Closed form of ``-[g, K]``: ``f -> (1/p) log(w) (T f)``."""
    def d(f):
        f = np.asarray(f)
        m = f.shape[0].bit_length() - 1
        try:
            M = g.output_level(m)
            Tf = g.apply(f, out_level=M)
        except GridTooCoarse:
            Tf = g.apply(f)
            M = Tf.shape[0].bit_length() - 1
        return np.log(g.weight_vector(M)) / g.p * Tf
    return d


# ---------------------------------------------------------------------------
# Block contractions on ell_p


class BlockContraction(ActionElement):
    """Into-isometry ``T_u x = sum_j x_j u_j`` of ``ell_p^m`` into ``ell_p^n``."""

    kind = "BlockContraction"
    is_isometry = True

    def __init__(self, blocks, p: float = 2.0, tol: float = 1e-12):
        U = np.atleast_2d(np.asarray(blocks, dtype=float))
        self.U = U  # rows are the blocks
        self.p = float(p)
        supp = U != 0.0
        if np.any(supp.sum(axis=0) > 1):
            raise ValueError("blocks must be disjointly supported")
        sp = lp(U.shape[1], self.p)
        for u in U:
            if abs(norm(sp, u) - 1.0) > tol:
                raise ValueError("blocks must be normalized")
        self.m, self.n = U.shape

    def apply(self, x):
        x = np.asarray(x)
        if x.shape[0] != self.m:
            raise DimensionError("dimension mismatch")
        return self.U.T @ x

    def matrix(self, n=None):
        return self.U.T

    def compose(self, other: "BlockContraction") -> "BlockContraction":
        if other.n != self.m:
            raise DimensionError("cannot compose: dimensions do not chain")
        return BlockContraction(np.array([self.apply(u) for u in other.U]), self.p)

    def key(self):
        return ("Block", self.U.shape, tuple(np.round(self.U, 12).ravel()))

    def derivation_value(self) -> np.ndarray:
        """Matrix of ``x -> sum_j x_j K(u_j)``."""
        sp = lp(self.n, self.p)
        return np.column_stack([kalton_peck(sp, u) for u in self.U])


def block_contraction(blocks, p: float = 2.0):
    """The element ``T_u`` together with its derivation value ``x -> x.K(u)``."""
    T = BlockContraction(blocks, p)
    D = T.derivation_value()
    return T, (lambda x: D @ np.asarray(x))


def random_blocks(rng: np.random.Generator, m: int, n: int, p: float = 2.0) -> np.ndarray:
    """``m`` disjoint normalized random blocks in ``ell_p^n`` (``n >= m``)."""
    if n < m:
        raise ValueError("need n >= m")
    cuts = np.sort(rng.choice(np.arange(1, n), size=m - 1, replace=False)) if m > 1 else np.array([], int)
    bounds = np.concatenate([[0], cuts, [n]])
    perm = rng.permutation(n)
    U = np.zeros((m, n))
    for j in range(m):
        idx = perm[bounds[j]:bounds[j + 1]]
        v = rng.standard_normal(idx.size)
        v[np.abs(v) < 1e-3] = 1e-3
        U[j, idx] = v
        U[j] /= norm(lp(n, p), U[j])
    return U


# ---------------------------------------------------------------------------
# Derivations


@dataclass
class Derivation:
    """``g -> d(g)`` together with the actions ``u``, ``v`` it is associated to.

    ``d(g)``, ``u(g)`` and ``v(g)`` are callables on vectors.  By default
    ``u(g) = v(g) = g`` and the product is ``g.compose(h)``.
    """

    d: Callable
    u: Callable = field(default=lambda g: g)
    v: Callable = field(default=lambda g: g)
    product: Callable = field(default=lambda g, h: g.compose(h))

    def __call__(self, g):
        return self.d(g)


def _default_diff_norm(a, b):
    if a.shape != b.shape:
        a, b = align(a, b)
    return a - b


def derivation_identity_check(der: Derivation, samples: Iterable[tuple], norm_fn=None,
                              seed: int | None = None) -> Estimate:
    """Max over ``(g, h, y)`` of ``||d(gh)y - u(g)d(h)y - d(g)v(h)y|| / ||y||``.

    Vectors of different dyadic lengths are compared after refinement to the
    finer grid.
    """
    nf = norm_fn or (lambda z: float(np.linalg.norm(z) / math.sqrt(z.size)))
    best, arg, count = 0.0, None, 0
    for g, h, y in samples:
        y = np.asarray(y, dtype=float)
        ny = nf(y)
        if ny == 0.0:
            continue
        count += 1
        lhs = np.asarray(der.d(der.product(g, h))(y))
        t1 = np.asarray(der.u(g)(der.d(h)(y)))
        t2 = np.asarray(der.d(g)(der.v(h)(y)))
        lhs, t1, t2 = align(lhs, t1, t2) if len({lhs.size, t1.size, t2.size}) > 1 else (lhs, t1, t2)
        r = nf(lhs - t1 - t2) / ny
        if r > best:
            best, arg = r, (g, h, y)
    return Estimate(best, seed, count, arg)


def inner_derivation(L, u: Callable = lambda g: g, v: Callable = lambda g: g,
                     product: Callable = lambda g, h: g.compose(h)) -> Derivation:
    """``d(g) = [u(g), L, v(g)] = u(g) L - L v(g)`` for a fixed matrix ``L``."""
    L = np.asarray(L)
    def d(g):
        ug, vg = u(g), v(g)
        return lambda y: ug(L @ np.asarray(y)) - L @ vg(y)
    return Derivation(d, u, v, product)


# ---------------------------------------------------------------------------
# The c0 example: G = {-1, 1}^n acting by signs on R^n and trivially on R


class _Trivial(ActionElement):
    kind = "Matrix"
    is_isometry = True

    def __init__(self, k: int = 1):
        self.k = k

    def apply(self, x):
        return np.asarray(x, dtype=float)

    def compose(self, other):
        return self

    def inverse(self):
        return self

    def key(self):
        return ("Trivial", self.k)


@dataclass
class C0Example:
    n: int
    A: np.ndarray  # n x 1 comparison map, A(y) = -(y/2) 1
    derivation: Derivation

    def u(self, g: Unit) -> Unit:
        return g

    def v(self, g: Unit) -> ActionElement:
        return _Trivial(1)

    def d_matrix(self, g: Unit) -> np.ndarray:
        return (g.eps == -1.0).astype(float).reshape(-1, 1)

    def commutator_A(self, g: Unit) -> np.ndarray:
        """Matrix of ``[u(g), A, v(g)] = u(g) A - A``."""
        return g.matrix(self.n) @ self.A - self.A


def c0_example(n: int) -> C0Example:
    if n < 1:
        raise ValueError("n must be >= 1")
    A = -0.5 * np.ones((n, 1))
    def d(g):
        col = (g.eps == -1.0).astype(float)
        return lambda y: col * float(np.asarray(y).reshape(-1)[0])
    der = Derivation(d, u=lambda g: g, v=lambda g: _Trivial(1))
    return C0Example(n, A, der)
