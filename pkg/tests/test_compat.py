import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistlab import compat
from twistlab.actions import (Derivation, DyadicLamperti, c0_example, identity, inner_derivation, lamperti_chain,
                              lamperti_derivation, random_unit, sign_group, sign_vector, unit_group)
from twistlab.compat import (GPair, TriangularRep, average_extension_family, average_intertwiner,
                             average_to_equivariant, baba_check, centralizer_constant, check_equivalence,
                             check_splitting, commutator, compatibility_defect, convex_combination_bound,
                             equivariance_defect, homogeneous_norm, jordan_block_rep, linper_check,
                             random_complex_structure, solve_commutator_system, symmetrize_complex,
                             triangular_matrix, triangular_norm)
from twistlab.quasimaps import TwistedSum, kalton_peck_map, linear_map, zero_map
from twistlab.vecspace import dlp, lp, sup


def test_diagonal_exact_norm():
    e = homogeneous_norm(linear_map(np.diag([1.0, -3.0, 2.0])), lp(3, 1.5), lp(3, 1.5))
    assert e.value == pytest.approx(3.0) and e.meta["exact"]


# the sup-norm sphere is not smooth, so ascent there stops a little short
@pytest.mark.parametrize("p,q,rel", [(1.0, 1.0, 1e-6), (1.0, 3.0, 1e-6), (2.0, 2.0, 1e-6), (3.0, math.inf, 1e-6),
                                     (math.inf, math.inf, 1e-3)])
def test_exact_matches_sphere_search(p, q, rel):
    rng = np.random.default_rng(0)
    M = rng.standard_normal((4, 5))
    dom, cod = lp(5, p, rng.uniform(0.5, 2, 5)), lp(4, q)
    exact = homogeneous_norm(linear_map(M), dom, cod, "exact_linear")
    found = homogeneous_norm(linear_map(M), dom, cod, "sphere_search", seed=1, restarts=16)
    assert found.value <= exact.value * (1 + 1e-9)
    assert found.value >= exact.value * (1 - rel)


def test_sampling_is_lower_bound():
    M = np.array([[2.0, 1.0], [0.0, 1.0]])
    s = homogeneous_norm(linear_map(M), lp(2), lp(2), "sampling", n_samples=300)
    assert s.value <= np.linalg.norm(M, 2) + 1e-12 and s.value > 0.9 * np.linalg.norm(M, 2)


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError):
        homogeneous_norm(linear_map(np.eye(2)), lp(2), lp(2), "guess")
    with pytest.raises(ValueError):
        homogeneous_norm(kalton_peck_map(lp(2)), lp(2), lp(2), "exact_linear")


def test_kalton_peck_commutes_with_units():
    rng = np.random.default_rng(3)
    G = [random_unit(5, rng) for _ in range(6)]
    e = centralizer_constant(G, kalton_peck_map(lp(5)), lp(5), lp(5), restarts=4, steps=20)
    assert e.value < 1e-12


def test_lamperti_commutator_closed_form():
    # [T, K] f = -(1/p) log(w) T f, attained on a cell indicator
    for r in (1, 2, 4):
        g = lamperti_chain(r)
        K = kalton_peck_map(dlp(6))
        best = 0.0
        for i in range(64):
            f = np.zeros(64)
            f[i] = 1.0
            Tf = g.apply(f)
            lev = Tf.size.bit_length() - 1
            c = g.apply(K(f)) - kalton_peck_map(dlp(lev))(Tf)
            assert np.allclose(c, -lamperti_derivation(g)(f), atol=1e-12)
            best = max(best, np.linalg.norm(c) / np.linalg.norm(Tf))
        assert best == pytest.approx(r * math.log(2) / 2, rel=1e-12)


def test_lamperti_pair_is_compatible():
    G = [lamperti_chain(r) for r in range(4)]
    pair = GPair(kalton_peck_map(dlp(3)), Derivation(lamperti_derivation))

    def cm(g):
        def B(f):
            Tf = g.apply(f)
            lev = Tf.size.bit_length() - 1
            return g.apply(pair.omega(f)) - kalton_peck_map(dlp(lev))(Tf) + lamperti_derivation(g)(f)
        return B

    rng = np.random.default_rng(0)
    worst = max(float(np.max(np.abs(cm(g)(rng.standard_normal(8))))) for g in G for _ in range(20))
    assert worst < 1e-9


def test_triangular_isometry_for_compatible_units():
    sp = lp(4)
    ts = TwistedSum(sp, sp, kalton_peck_map(sp))
    rep = TriangularRep(Derivation(lambda g: (lambda y: 0 * y)), ts)
    g = random_unit(4, np.random.default_rng(0))
    e = triangular_norm(rep, g, n_samples=60)
    assert e.value == pytest.approx(1.0, abs=1e-9) and e.meta["min_ratio"] == pytest.approx(1.0, abs=1e-9)


def test_multiplicativity():
    sp = lp(3)
    der = inner_derivation(np.arange(9.0).reshape(3, 3))
    rep = TriangularRep(der, TwistedSum(sp, sp, kalton_peck_map(sp)))
    rng = np.random.default_rng(1)
    g, h = random_unit(3, rng), random_unit(3, rng)
    assert rep.multiplicativity_defect(g, h, rng.standard_normal(3), rng.standard_normal(3)) < 1e-12


def test_jordan_block_grows_linearly():
    R = np.array([[0.0, 1.0], [0.0, 0.0]])
    der = jordan_block_rep(R, 1.0)
    y = np.array([0.0, 1.0])
    vals = [np.linalg.norm(der(k)(y)) for k in (1, 2, 4, 8)]
    assert vals == pytest.approx([1, 2, 4, 8])
    x = np.array([0.3, -1.0])
    assert np.allclose(der(5)(x), der(2)(x) + der(3)(x))


def test_baba_identity():
    sp = lp(4)
    M = np.diag([1.0, 2.0, 3.0, 4.0])
    u = random_unit(4, np.random.default_rng(2))
    ys = list(np.random.default_rng(3).standard_normal((20, 4)))
    out = baba_check(u, linear_map(M), u, sp, sp, ys)
    assert out["pass"] and out["commutator"] > 0


def test_linear_perturbation_conjugation():
    rng = np.random.default_rng(4)
    u = random_unit(3, rng).matrix(3)
    v = random_unit(3, rng).matrix(3)
    L = rng.standard_normal((3, 3))
    out = linper_check(u, v, L, kalton_peck_map(lp(3)), lp(3), lp(3), list(rng.standard_normal((10, 3))))
    assert out["pass"], out


def test_averaging_produces_equivariant_map():
    G = unit_group(3)
    W = np.random.default_rng(5).standard_normal((3, 3))
    avg = average_to_equivariant(G, linear_map(W))
    ys = list(np.random.default_rng(6).standard_normal((5, 3)))
    assert equivariance_defect(G, linear_map(W), ys=ys) > 0.1
    assert equivariance_defect(G, avg.omega, ys=ys) < 1e-12


def test_averaging_requires_group():
    with pytest.raises(ValueError):
        average_to_equivariant([random_unit(3, np.random.default_rng(0))], linear_map(np.eye(3)))


def test_averaging_fixes_equivariant_maps():
    G = sign_group(3)
    avg = average_to_equivariant(G, kalton_peck_map(lp(3)))
    y = np.array([1.0, -2.0, 0.5])
    assert np.allclose(avg.B(y), 0, atol=1e-14)


def _um(n):
    return lambda g: g.matrix(n)


def test_extension_family_inner_is_fixed():
    n = 3
    G = unit_group(2)
    L = np.random.default_rng(7).standard_normal((2, 2))
    fam = {g: g.matrix(2) @ L - L @ g.matrix(2) for g in G}
    ext = average_extension_family(G, fam, _um(2), _um(2))
    for g in G:
        assert np.allclose(ext.matrices[g.key()], fam[g], atol=1e-12)


def test_extension_family_zero_and_z2():
    s = sign_vector([-1, 1])
    G = [identity(2), s]
    S = s.matrix(2)
    F = np.array([[1.0, 2.0], [3.0, 4.0]])
    Ls = (F - S @ F @ S) / 2  # L_s = -u(s) L_s v(s)
    ext = average_extension_family(G, {G[0]: np.zeros((2, 2)), s: Ls}, _um(2), _um(2))
    # two-element average: d(s) = (L_s + u(s) L_e + L_s v(e) + L_e v(s)) / 2 = L_s
    assert np.allclose(ext.matrices[s.key()], Ls)
    zero = average_extension_family(G, {g: np.zeros((2, 2)) for g in G}, _um(2), _um(2))
    assert all(np.all(m == 0) for m in zero.matrices.values())


def test_extension_family_rejects_bad_normalization():
    G = sign_group(2)
    fam = {g: np.eye(2) for g in G}
    with pytest.raises(ValueError):
        average_extension_family(G, fam, _um(2), _um(2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_extension_family_is_derivation_within_twice_the_defect(seed):
    rng = np.random.default_rng(seed)
    G, n = unit_group(2), 2
    W = rng.standard_normal((n, n))
    U = {g.key(): g.matrix(n) for g in G}
    fam, done = {}, set()
    for g in G:
        if g.key() in done:
            continue
        gi = g.inverse()
        M = U[g.key()]
        if np.allclose(M, np.eye(n)):
            E = np.zeros((n, n))
            fam[g] = E - (M @ W - W @ M)
            done.add(g.key())
            continue
        F = rng.standard_normal((n, n))
        E = (F - U[gi.key()] @ F @ U[gi.key()]) / 2 if gi.key() == g.key() else F
        fam[g] = E - (M @ W - W @ M)
        if gi.key() != g.key():
            Ei = -U[gi.key()] @ E @ U[gi.key()]
            fam[gi] = Ei - (U[gi.key()] @ W - W @ U[gi.key()])
            done.add(gi.key())
        done.add(g.key())
    ext = average_extension_family(G, fam, _um(n), _um(n))
    D = ext.matrices
    for g in G:
        for h in G:
            gh = g.compose(h)
            assert np.allclose(D[gh.key()], U[g.key()] @ D[h.key()] + D[g.key()] @ U[h.key()], atol=1e-12)
    din = max(np.linalg.norm(U[g.key()] @ W - W @ U[g.key()] + fam[g], 2) for g in G)
    dout = max(np.linalg.norm(U[g.key()] @ W - W @ U[g.key()] + D[g.key()], 2) for g in G)
    assert dout <= 2 * din + 1e-12


@pytest.mark.parametrize("a,b", [(2, 2), (2, 4), (4, 2), (4, 4)])
def test_symmetrize_complex(a, b):
    rng = np.random.default_rng(a * 10 + b)
    u, v = random_complex_structure(a, rng), random_complex_structure(b, rng)
    M = symmetrize_complex(u, v, rng.standard_normal((a, b)))
    T = triangular_matrix(u, v, M)
    assert np.max(np.abs(T @ T + np.eye(a + b))) < 1e-12


def test_symmetrize_rejects_non_structure():
    with pytest.raises(ValueError):
        symmetrize_complex(np.eye(2), np.eye(2), np.eye(2))


def test_average_intertwiner():
    G = unit_group(2)
    rng = np.random.default_rng(8)
    L1, L2 = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))

    def rep(L):
        return lambda g: triangular_matrix(g.matrix(2), g.matrix(2), g.matrix(2) @ L - L @ g.matrix(2))

    T = np.eye(4)
    T[:2, 2:] = rng.standard_normal((2, 2))
    R = average_intertwiner(G, T, rep(L1), rep(L2), 2)
    for g in G:
        assert np.allclose(R @ rep(L1)(g), rep(L2)(g) @ R, atol=1e-12)
    with pytest.raises(ValueError):
        average_intertwiner(G, 2 * np.eye(4), rep(L1), rep(L2), 2)


def test_commutator_system_c0():
    ex = c0_example(3)
    G = sign_group(3)
    d = [ex.d_matrix(g) for g in G]
    u = [g.matrix(3) for g in G]
    v = [np.eye(1)] * len(G)
    inner = solve_commutator_system(d, u, v, sign=1.0)
    split = solve_commutator_system(d, u, v, sign=-1.0)
    assert inner["unique"] and inner["residual"] < 1e-12 and np.allclose(inner["L"], ex.A)
    assert split["unique"] and split["residual"] < 1e-12 and np.allclose(split["L"], -ex.A)


def test_c0_splitting_and_equivalence():
    n = 3
    ex = c0_example(n)
    G = sign_group(n)
    pair = GPair(zero_map(), ex.derivation)
    ys = [np.array([1.0]), np.array([-2.5])]
    rep = check_splitting(pair, -ex.A, G, lp(1), sup(n), ys, restarts=4, steps=20)
    assert rep.passed and rep.details["bound_estimate"] == pytest.approx(0.5)
    assert rep.to_dict()["pass"] is True
    bad = check_splitting(pair, ex.A, G, lp(1), sup(n), ys, restarts=4, steps=20)
    assert not bad.passed
    # the trivial pair (0, 0) and (0, d) are equivalent through the corner -A
    eq = check_equivalence(pair, GPair(zero_map(), Derivation(lambda g: (lambda y: 0 * np.asarray(y)),
                                                             ex.derivation.u, ex.derivation.v)),
                           -ex.A, G, lp(1), sup(n), ys, restarts=4, steps=20)
    assert eq.passed


def test_compatibility_defect_of_inner_pair():
    L = np.random.default_rng(9).standard_normal((3, 3))
    pair = GPair(linear_map(L), inner_derivation(-L))
    G = unit_group(3)[:10]
    assert compatibility_defect(pair, G, lp(3), lp(3)).value < 1e-12


def test_lamperti_splitting_residual_grows():
    res = [compat.lamperti_splitting_residual([lamperti_chain(r)], 4)["residual"] for r in (1, 2, 3)]
    assert res[0] > 0.05 and res[0] < res[1] < res[2]
    mp = compat.lamperti_splitting_residual([lamperti_chain(0)], 3)
    assert mp["residual"] < 1e-12


def test_convex_combination_bound():
    rng = np.random.default_rng(10)
    sp = lp(4)
    K = kalton_peck_map(sp)
    units = [random_unit(4, rng) for _ in range(3)]
    lam = np.array([0.5, -0.3, 0.2])
    for _ in range(10):
        out = convex_combination_bound(K, sp, sp, units, lam, rng.standard_normal(4))
        assert out["pass"] and out["centralizer"] < 1e-12
    with pytest.raises(ValueError):
        convex_combination_bound(K, sp, sp, units, [0.5, 0.5, 0.5], np.ones(4))
