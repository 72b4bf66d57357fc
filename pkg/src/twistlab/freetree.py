"""Shift operators on the truncated Cayley tree of a free group.

Words are tuples of nonzero ints: ``j`` is the generator ``a_j`` and ``-j``
its inverse.  Nodes are the reduced words of length at most ``D``; operators
send anything that would leave the truncation to 0.  Identities are asserted
only on the admissible subspace where that never happens.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .compat import homogeneous_norm
from .vecspace import lp

Word = tuple


def reduce_word(w) -> Word:
    out: list[int] = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def is_reduced(w) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def inverse_word(w) -> Word:
    return tuple(-a for a in reversed(w))


def words_up_to(k: int, length: int) -> list[Word]:
    letters = [j for i in range(1, k + 1) for j in (i, -i)]
    out = [()]
    frontier = [()]
    for _ in range(length):
        frontier = [w + (a,) for w in frontier for a in letters if not w or w[-1] != -a]
        out.extend(frontier)
    return out


class TreeSpace:
    """``ell_2`` of the reduced words of length ``<= D`` over ``k`` generators."""

    def __init__(self, k: int, D: int):
        if k < 1 or D < 0:
            raise ValueError("need k >= 1 and D >= 0")
        self.k, self.D = k, D
        self.words = words_up_to(k, D)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.depth = np.array([len(w) for w in self.words])
        self.parent = np.array([self.index[w[:-1]] if w else -1 for w in self.words])

    @property
    def size(self) -> int:
        return len(self.words)

    @staticmethod
    def expected_size(k: int, D: int) -> int:
        if k == 1:
            return 1 + 2 * D
        return 1 + 2 * k * ((2 * k - 1) ** D - 1) // (2 * k - 2)

    def basis(self, w) -> np.ndarray:
        e = np.zeros(self.size)
        e[self.index[tuple(w)]] = 1.0
        return e

    def admissible(self, ell: int) -> np.ndarray:
        """Indices of nodes of depth ``<= D - ell - 1``."""
        return np.flatnonzero(self.depth <= self.D - ell - 1)

    @functools.cached_property
    def R(self) -> sp.csr_matrix:
        child = np.flatnonzero(self.parent >= 0)
        return sp.csr_matrix((np.ones(child.size), (child, self.parent[child])), shape=(self.size,) * 2)

    @functools.cached_property
    def L(self) -> sp.csr_matrix:
        return self.R.T.tocsr()

    @functools.lru_cache(maxsize=None)
    def _translation_targets(self, g: Word) -> np.ndarray:
        tgt = np.full(self.size, -1)
        for i, w in enumerate(self.words):
            s = reduce_word(g + w)
            if len(s) <= self.D:
                tgt[i] = self.index[s]
        return tgt

    def translation_matrix(self, g) -> sp.csr_matrix:
        tgt = self._translation_targets(reduce_word(tuple(g)))
        keep = np.flatnonzero(tgt >= 0)
        return sp.csr_matrix((np.ones(keep.size), (tgt[keep], keep)), shape=(self.size,) * 2)

    def metadata(self) -> dict:
        return {"k": self.k, "D": self.D, "node_count": self.size}

    def to_json(self) -> str:
        return json.dumps(self.metadata())


def right_shift(space: TreeSpace, x) -> np.ndarray:
    """``e_t -> sum of the children of t``; depth-``D`` nodes go to 0."""
    return space.R @ np.asarray(x, dtype=float)


def left_shift(space: TreeSpace, x) -> np.ndarray:
    """``e_t -> e_parent(t)``, ``e_root -> 0``."""
    return space.L @ np.asarray(x, dtype=float)


def translate(space: TreeSpace, g, x) -> tuple[np.ndarray, bool]:
    """``e_t -> e_{g t}`` and a flag telling whether mass left the truncation."""
    x = np.asarray(x, dtype=float)
    tgt = space._translation_targets(reduce_word(tuple(g)))
    lost = bool(np.any(x[tgt < 0]))
    y = np.zeros_like(x)
    keep = tgt >= 0
    np.add.at(y, tgt[keep], x[keep])
    return y, lost


def commutator_matrix(space: TreeSpace, g, op: str = "R") -> sp.csr_matrix:
    U = space.translation_matrix(g)
    S = space.R if op == "R" else space.L
    return (U @ S - S @ U).tocsr()


@dataclass
class CommutatorReport:
    k: int
    D: int
    ell: int
    rows: list  # (word, exact_norm, sample_max, search_max)
    witness: float
    seed: int

    @property
    def max_estimate(self) -> float:
        return max(max(r[2], r[3]) for r in self.rows)

    @property
    def max_exact(self) -> float:
        return max(r[1] for r in self.rows)

    def to_dict(self) -> dict:
        return {"k": self.k, "D": self.D, "ell": self.ell, "seed": self.seed, "witness": self.witness,
                "max_exact": self.max_exact, "max_estimate": self.max_estimate,
                "rows": [{"g": list(w), "exact": e, "sampled": s, "search": q} for w, e, s, q in self.rows]}


def commutator_bound_experiment(space: TreeSpace, ell: int, n_samples: int = 1000,
                                restarts: int = 64, steps: int = 200, seed: int = 0) -> CommutatorReport:
    """``||[u(g), R]||`` on vectors supported at depth ``<= D - ell - 1`` for every ``|g| <= ell``.

    Three numbers per ``g``: the exact spectral norm of the restricted
    matrix, the best of ``n_samples`` Gaussian ratios and the sphere-search
    lower bound.
    """
    if ell >= space.D:
        raise ValueError("need ell < D so the admissible subspace is nonempty")
    cols = space.admissible(ell)
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((n_samples, cols.size))
    rows = []
    for g in words_up_to(space.k, ell):
        C = commutator_matrix(space, g)[:, cols].toarray()
        C = C[np.any(C != 0, axis=1)]  # zero rows do not change ell_2 norms
        if not C.size:
            C = np.zeros((1, cols.size))
        exact = float(np.linalg.norm(C, 2)) if C.size else 0.0
        sampled = float(np.max(np.linalg.norm(samples @ C.T, axis=1) / np.linalg.norm(samples, axis=1)))
        est = homogeneous_norm(C, lp(cols.size), lp(C.shape[0]), "sphere_search", seed=seed,
                               restarts=restarts, steps=steps)
        rows.append((g, exact, sampled, est.value))
    a1 = (1,)
    wit = commutator_matrix(space, a1) @ space.basis(())
    witness_err = float(np.max(np.abs(wit - space.basis(()))))
    return CommutatorReport(space.k, space.D, ell, rows, witness_err, seed)


def sibling_sum(space: TreeSpace, n: int, parent: Word = ()) -> np.ndarray:
    """Sum of ``n`` children of ``parent``."""
    kids = [w for w in space.words if len(w) == len(parent) + 1 and w[:-1] == parent]
    if n > len(kids):
        raise ValueError(f"only {len(kids)} children available at this node; increase k")
    x = np.zeros(space.size)
    for w in kids[:n]:
        x[space.index[w]] = 1.0
    return x


def growth_experiment(space: TreeSpace, ns) -> list[tuple[int, float]]:
    """Rows ``(n, ||L x_n|| / ||x_n||)`` with ``x_n`` a sum of ``n`` depth-1 nodes (ratio ``sqrt(n)``)."""
    rows = []
    for n in ns:
        x = sibling_sum(space, n)
        rows.append((n, float(np.linalg.norm(left_shift(space, x)) / np.linalg.norm(x))))
    return rows


def tree_equivalence_report(space: TreeSpace, ns, cs=(0.0, 0.5, 1.0, 2.0), ell: int = 1) -> dict:
    """Compare the pairs ``(0, 0)`` and ``(L, 0)`` on the tree.

    Equivalence needs one linear ``T`` with ``[u(g), T] = 0`` for all ``g``
    and ``-L - T`` bounded.  Two candidate families are scored:

    * ``T = c Id`` (translation-equivariant): derivation defect 0, but
      ``||(-L - c Id) x_n|| / ||x_n|| = sqrt(n + c^2)`` grows without bound;
    * ``T = -L``: the bound is 0, but ``[u(g), L] = -[u(g), R]`` is nonzero.
    """
    cols = space.admissible(ell)
    gens = [g for g in words_up_to(space.k, ell) if g]
    L = space.L.toarray()
    growth = []
    for c in cs:
        for n in ns:
            x = sibling_sum(space, n)
            r = float(np.linalg.norm(-L @ x - c * x) / np.linalg.norm(x))
            growth.append({"c": c, "n": n, "ratio": r})
    shift_defect = max(float(np.linalg.norm(commutator_matrix(space, g, "L")[:, cols].toarray(), 2))
                       for g in gens)
    by_c = {}
    for row in growth:
        by_c.setdefault(row["c"], []).append(row["ratio"])
    grows = all(all(b > a for a, b in zip(v, v[1:])) for v in by_c.values())
    return {"op": "tree_equivalence", "growth": growth, "equivariant_candidate_defect": 0.0,
            "shift_candidate_bound": 0.0, "shift_candidate_derivation_defect": shift_defect,
            "equivariant_candidates_grow": grows,
            "sqrt_n_lower_bound_holds": all(r["ratio"] >= math.sqrt(r["n"]) - 1e-12 for r in growth)}
