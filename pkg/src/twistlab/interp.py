"""Complex interpolation of weighted ell_p couples.

The endpoints are ``ell_{p_j}(w_j)`` with weight-inside norms
``(sum w |x|^p)^(1/p)``.  An endpoint with ``p_j = inf`` is the plain sup
norm: its weight enters only through ``w^(1/p_j) = 1``, so weights given
there are ignored.

For ``x`` with ``||x||_theta = 1`` and ``y = w_theta |x|^p_theta`` the
extremal function is ::

    M(z) = sgn(x) y^(1/p(z)) w0^(-(1-z)/p0) w1^(-z/p1)

and ``dM/dz = c M`` with the real bracket
``c = (1/p1 - 1/p0) log y + log(w0)/p0 - log(w1)/p1``; the differential is
``Omega_theta(x) = c x``.  Since ``c`` depends only on ``|M|``, which is
constant along vertical lines, ``F(t) = M(theta + i t)`` solves
``F' = i Omega_theta(F)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .compat import centralizer_constant, homogeneous_norm
from .quasimaps import Estimate, HomogeneousMap
from .vecspace import DimensionError, SpaceSpec, _parse_p, as_vector, lp, sup, weighted_lp_norm

THETA_MIN = 1e-6


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class InterpCouple:
    p0: float
    p1: float
    w0: tuple
    w1: tuple

    def __post_init__(self):
        object.__setattr__(self, "p0", _parse_p(self.p0))
        object.__setattr__(self, "p1", _parse_p(self.p1))
        w0 = tuple(float(v) for v in self.w0)
        w1 = tuple(float(v) for v in self.w1)
        if len(w0) != len(w1) or not w0:
            raise DimensionError("endpoint weights must share a dimension")
        if any(not (v > 0 and math.isfinite(v)) for v in w0 + w1):
            raise ValueError("weights must be positive and finite")
        if math.isinf(self.p0) and math.isinf(self.p1):
            raise ValueError("at least one endpoint exponent must be finite")
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "w1", w1)

    @property
    def n(self) -> int:
        return len(self.w0)

    def endpoint(self, j: int) -> SpaceSpec:
        p, w = (self.p0, self.w0) if j == 0 else (self.p1, self.w1)
        return sup(self.n) if math.isinf(p) else lp(self.n, p, w)

    def space(self, theta: float) -> SpaceSpec:
        p, w = interp_params(self, theta)
        return sup(self.n) if math.isinf(p) else lp(self.n, p, w)

    def to_json(self) -> str:
        enc = lambda p: "inf" if math.isinf(p) else p
        return json.dumps({"p0": enc(self.p0), "p1": enc(self.p1), "w0": list(self.w0), "w1": list(self.w1)})

    @classmethod
    def from_json(cls, text: str) -> "InterpCouple":
        d = json.loads(text)
        return cls(d["p0"], d["p1"], tuple(d["w0"]), tuple(d["w1"]))


def couple(p0, p1, n: int | None = None, w0=None, w1=None) -> InterpCouple:
    if w0 is None and w1 is None and n is None:
        raise ValueError("give weights or a dimension")
    n = n if n is not None else len(w0 if w0 is not None else w1)
    return InterpCouple(p0, p1, tuple(w0) if w0 is not None else (1.0,) * n,
                        tuple(w1) if w1 is not None else (1.0,) * n)


def discretized_couple(p0, p1, m: int) -> InterpCouple:
    """``(L_p0, L_p1)`` on the level-``m`` dyadic grid (cell weights ``2^-m`` at finite ends)."""
    n = 1 << m
    return InterpCouple(p0, p1, (1.0 / n,) * n, (1.0 / n,) * n)


def interp_params(c: InterpCouple, theta: float) -> tuple[float, np.ndarray]:
    """``(p_theta, w_theta)``."""
    if not (0.0 <= theta <= 1.0):
        raise ValueError("theta must lie in [0, 1]")
    s = (1.0 - theta) * _inv(c.p0) + theta * _inv(c.p1)
    if s == 0.0:
        return math.inf, np.ones(c.n)
    p = 1.0 / s
    logw = (1.0 - theta) * p * _inv(c.p0) * np.log(c.w0) + theta * p * _inv(c.p1) * np.log(c.w1)
    return p, np.exp(logw)


def theta_norm(c: InterpCouple, theta: float, x) -> float:
    p, w = interp_params(c, theta)
    return weighted_lp_norm(np.asarray(x), p, None if math.isinf(p) else w)


def endpoint_norm(c: InterpCouple, j: int, x) -> float:
    p, w = (c.p0, c.w0) if j == 0 else (c.p1, c.w1)
    return weighted_lp_norm(np.asarray(x), p, None if math.isinf(p) else np.asarray(w))


def _log_y(c: InterpCouple, theta: float, a: np.ndarray):
    """``log(w_theta |a|^p_theta / ||a||_theta^p_theta)`` on the support of ``a``."""
    p, w = interp_params(c, theta)
    r = weighted_lp_norm(a, p, w)
    nz = a > 0
    ly = np.zeros_like(a)
    ly[nz] = np.log(w[nz]) + p * (np.log(a[nz]) - math.log(r))
    return ly, nz, r


def _bracket(c: InterpCouple, theta: float, a: np.ndarray):
    ly, nz, r = _log_y(c, theta, a)
    br = (_inv(c.p1) - _inv(c.p0)) * ly + _inv(c.p0) * np.log(c.w0) - _inv(c.p1) * np.log(c.w1)
    br[~nz] = 0.0
    return br, nz, r


def _check_theta(theta):
    if not (THETA_MIN <= theta <= 1.0 - THETA_MIN):
        raise ValueError(f"theta must lie in [{THETA_MIN}, {1 - THETA_MIN}]")


def minimal_function(c: InterpCouple, theta: float, x, z) -> np.ndarray:
    """Extremal analytic function through ``x`` at ``theta``, evaluated at ``z`` (scalar or array)."""
    _check_theta(theta)
    x = as_vector(x)
    if not np.any(x):
        raise ValueError("the minimal function is defined for x != 0")
    ly, nz, r = _log_y(c, theta, np.abs(x))
    z = np.asarray(z, dtype=complex)
    zz = z.reshape(-1, 1)
    inv_pz = (1.0 - zz) * _inv(c.p0) + zz * _inv(c.p1)
    expo = inv_pz * ly - (1.0 - zz) * _inv(c.p0) * np.log(c.w0) - zz * _inv(c.p1) * np.log(c.w1)
    out = r * np.sign(x) * np.exp(expo)
    out[:, ~nz] = 0.0
    return out[0] if z.ndim == 0 else out.reshape(z.shape + (c.n,))


def minimal_function_derivative(c: InterpCouple, theta: float, x, z) -> np.ndarray:
    """Analytic ``d/dz`` of :func:`minimal_function`."""
    br, _, _ = _bracket(c, theta, np.abs(as_vector(x)))
    return br * minimal_function(c, theta, x, z)


def differential(c: InterpCouple, theta: float, x) -> np.ndarray:
    """``Omega_theta(x)``; complex ``x`` is accepted (the bracket uses ``|x|``)."""
    _check_theta(theta)
    x = as_vector(x, complex_ok=True)
    if not np.any(x):
        raise ValueError("the differential is defined for x != 0")
    br, _, _ = _bracket(c, theta, np.abs(x))
    return br * x


def differential_map(c: InterpCouple, theta: float) -> HomogeneousMap:
    sp = c.space(theta)
    return HomogeneousMap(lambda x: differential(c, theta, x), sp, sp, "quasilinear", "Omega_theta")


def discretized_differential_map(p0, p1, theta: float) -> HomogeneousMap:
    """``Omega_theta`` of the discretized ``(L_p0, L_p1)`` couple on any dyadic grid."""
    def f(x):
        x = np.asarray(x)
        m = x.size.bit_length() - 1
        if x.size != 1 << m:
            raise DimensionError("discretized vectors need a power-of-two length")
        return differential(discretized_couple(p0, p1, m), theta, x)
    return HomogeneousMap(f, linearity_tag="quasilinear", name="Omega_theta")


def boundary_norm_defect(c: InterpCouple, theta: float, x, ts: Sequence[float]) -> float:
    """Max relative deviation of ``||M(j + it)||_j`` from ``||x||_theta``."""
    r = theta_norm(c, theta, x)
    worst = 0.0
    for j in (0, 1):
        vals = minimal_function(c, theta, x, j + 1j * np.asarray(ts, dtype=float))
        for v in vals:
            worst = max(worst, abs(endpoint_norm(c, j, np.abs(v)) - r) / r)
    return worst


# ---------------------------------------------------------------------------
# checks


def riesz_thorin_check(c: InterpCouple, theta: float, T, seed: int = 0, tol: float = 1e-9) -> dict:
    """``||T||_theta <= ||T||_0^(1-theta) ||T||_1^theta``.

    Norms are exact when the exponent pair allows a closed form; otherwise a
    sphere-search lower bound is used and, for an endpoint, the check is
    marked advisory (an endpoint lower bound does not bound the right side).
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (c.n, c.n):
        raise DimensionError("T must be n x n")

    def opnorm(space):
        try:
            return homogeneous_norm(T, space, space, "exact_linear"), True
        except ValueError:
            return homogeneous_norm(T, space, space, "sphere_search", seed=seed), False

    (n0, e0), (n1, e1), (nt, et) = opnorm(c.endpoint(0)), opnorm(c.endpoint(1)), opnorm(c.space(theta))
    bound = n0.value ** (1 - theta) * n1.value ** theta
    slack = tol if (e0 and e1) else 0.05
    ok = nt.value <= bound * (1.0 + slack)
    return {"op": "riesz_thorin_check", "seed": seed, "norm0": n0.value, "norm1": n1.value,
            "norm_theta": nt.value, "bound": bound, "exact": [e0, e1, et],
            "advisory": not (e0 and e1), "pass": bool(ok)}


def flow_check(c: InterpCouple, theta: float, x, ts: Sequence[float] = (-1, -0.1, 0, 0.1, 1)) -> dict:
    """Residual of ``F'(t) = i Omega_theta(F(t))`` for ``F(t) = M(theta + it)``."""
    x = as_vector(x)
    r = theta_norm(c, theta, x)
    res, ndev = 0.0, 0.0
    for t in ts:
        z = theta + 1j * t
        F = minimal_function(c, theta, x, z)
        dF = 1j * minimal_function_derivative(c, theta, x, z)  # d/dt = i d/dz
        res = max(res, theta_norm(c, theta, np.abs(dF - 1j * differential(c, theta, F))) / r)
        ndev = max(ndev, abs(theta_norm(c, theta, np.abs(F)) - r) / r)
    return {"op": "flow_check", "residual": res, "norm_deviation": ndev,
            "pass": bool(res <= 1e-8 and ndev <= 1e-10)}


def dual_couple(c: InterpCouple) -> InterpCouple:
    """Dual couple under ``<x, phi> = sum x_k phi_k``."""
    if not (1 < c.p0 < math.inf and 1 < c.p1 < math.inf):
        raise ValueError("dual couples need 1 < p_j < inf")
    q0, q1 = c.p0 / (c.p0 - 1), c.p1 / (c.p1 - 1)
    return InterpCouple(q0, q1, tuple(np.asarray(c.w0) ** (-q0 / c.p0)),
                        tuple(np.asarray(c.w1) ** (-q1 / c.p1)))


def dual_norm_maximizer(c: InterpCouple, theta: float, phi) -> np.ndarray:
    """The unit vector of ``X_theta`` attaining ``<x, phi> = ||phi||_*``."""
    p, w = interp_params(c, theta)
    phi = np.asarray(phi, dtype=float)
    q = p / (p - 1)
    x = np.sign(phi) * np.abs(phi) ** (q - 1) * w ** (-q / p)
    return x / weighted_lp_norm(x, p, w)


def _pairing_gap(c, d, theta, phi, y):
    """``<Omega*_theta phi, y> + <phi, Omega_theta y>``."""
    a = np.dot(differential(d, theta, phi), y) if np.any(phi) else 0.0
    b = np.dot(phi, differential(c, theta, y)) if np.any(y) else 0.0
    return float(a + b)


def duality_defect(c: InterpCouple, theta: float, samples: Iterable[tuple]) -> Estimate:
    """Max of ``|<Omega*_theta phi, y> + <phi, Omega_theta y>| / (||phi||_* ||y||)``.

    ``Omega*_theta`` is the differential of the dual couple; the two terms
    cancel exactly when ``p0 = p1``.
    """
    d = dual_couple(c)
    best, arg, count = 0.0, None, 0
    for phi, y in samples:
        phi, y = np.asarray(phi, dtype=float), np.asarray(y, dtype=float)
        den = theta_norm(d, theta, phi) * theta_norm(c, theta, y)
        count += 1
        if den == 0.0:
            continue
        r = abs(_pairing_gap(c, d, theta, phi, y)) / den
        if r > best:
            best, arg = r, (phi, y)
    return Estimate(best, None, count, arg)


def rank1_derivation(c: InterpCouple, theta: float, phi, x, ys: Sequence | None = None,
                     seed: int = 0, n_samples: int = 200, slack: float = 1.05) -> dict:
    """``d(phi (x) x) y = <Omega* phi, y> x + <phi, y> Omega(x)`` and its compatibility defect.

    ``[g, Omega] + d(g)`` with ``g = phi (x) x`` equals
    ``y -> (<Omega* phi, y> + <phi, Omega y>) x``; its sampled norm is
    compared with the duality constant over the same ``(phi, y)`` pool.
    """
    d = dual_couple(c)
    phi, x = np.asarray(phi, dtype=float), np.asarray(x, dtype=float)
    nphi, nx = theta_norm(d, theta, phi), theta_norm(c, theta, x)
    if nphi > 1 + 1e-12 or nx > 1 + 1e-12:
        raise ValueError("rank-one derivations need ||phi||_* <= 1 and ||x|| <= 1")
    om_phi = differential(d, theta, phi) if np.any(phi) else np.zeros_like(phi)
    om_x = differential(c, theta, x) if np.any(x) else np.zeros_like(x)

    def dmap(y):
        y = np.asarray(y, dtype=float)
        return np.dot(om_phi, y) * x + np.dot(phi, y) * om_x

    def g(y):
        return np.dot(phi, y) * x

    if ys is None:
        rng = np.random.default_rng(seed)
        ys = [rng.standard_normal(c.n) for _ in range(n_samples)]
    om = lambda v: differential(c, theta, v) if np.any(v) else np.zeros_like(v)
    best = 0.0
    for y in ys:
        ny = theta_norm(c, theta, y)
        B = g(om(y)) - om(g(y)) + dmap(y)
        best = max(best, theta_norm(c, theta, B) / ny)
    dual = duality_defect(c, theta, [(phi, y) for y in ys]).value
    return {"op": "rank1_derivation", "seed": seed, "samples": len(ys), "value": best,
            "duality_constant": dual, "bound": dual * nphi * nx * slack,
            "pass": bool(best <= dual * nphi * nx * slack + 1e-12), "map": dmap}


def scale_centralizer_check(c: InterpCouple, theta: float, G: Iterable, u=None, v=None,
                            omega: HomogeneousMap | None = None, domain: SpaceSpec | None = None,
                            isometries: bool = True, seed: int = 0, tol: float = 1e-9, **kw) -> dict:
    """Centralizer constant of ``Omega_theta`` over ``G``; 0 is expected for endpoint isometries."""
    om = omega or differential_map(c, theta)
    sp = domain or c.space(theta)
    args = {}
    if u is not None:
        args["u"] = u
    if v is not None:
        args["v"] = v
    est = centralizer_constant(list(G), om, sp, sp, seed=seed, **args, **kw)
    ok = est.value <= tol if isometries else math.isfinite(est.value)
    return {"op": "scale_centralizer_check", "seed": seed, "samples": est.n_samples,
            "value": est.value, "per_element": est.meta.get("per_element"), "pass": bool(ok)}


def theta_sweep_rows(c: InterpCouple, x, thetas: Sequence[float]) -> list[tuple]:
    """Rows ``(theta, quantity, value)`` for ``p_theta``, ``||x||_theta`` and ``||Omega_theta x||_theta``."""
    rows = []
    for th in thetas:
        p, _ = interp_params(c, th)
        nx = theta_norm(c, th, x)
        rows.append((th, "p_theta", p))
        rows.append((th, "norm", nx))
        rows.append((th, "omega_norm", theta_norm(c, th, differential(c, th, x)) / nx))
    return rows


def rows_to_csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "quantity", "value"])
    for th, q, v in rows:
        w.writerow([f"{th:.11e}", q, f"{v:.11e}"])
    return buf.getvalue()
