import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistlab.nabla import (EXHAUSTIVE_LIMIT, canonical_value, conjugated_nabla, l2_reduction_check, nabla,
                            unitary_gap_experiment, walsh_family)
from twistlab.quasimaps import kalton_peck
from twistlab.vecspace import lp

# independent 30-digit evaluation over all sign patterns
WALSH = {1: 0.4901290717342736, 2: 0.69314718055994531, 3: 1.4736819992063314}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_walsh_values_match_oracle(m):
    assert nabla(walsh_family(m)).value == pytest.approx(WALSH[m], rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 16])
def test_canonical_closed_form(n):
    r = nabla(np.eye(n))
    assert r.value == pytest.approx(canonical_value(n), rel=1e-12, abs=1e-15)
    assert r.spread < 1e-12  # every pattern gives the same value


def test_walsh_family_shape():
    W = walsh_family(3)
    assert np.allclose(W @ W.T, np.eye(8))
    assert np.allclose(np.abs(W), 2 ** -1.5)


def test_generic_map_agrees_with_kernel():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 4))
    sp = lp(4)
    a = nabla(X).value
    b = nabla(X, psi=lambda v: kalton_peck(sp, v), space=sp).value
    assert a == pytest.approx(b, rel=1e-12)


def test_monte_carlo_within_three_standard_errors():
    exact = nabla(walsh_family(4)).value
    mc = nabla(walsh_family(4), mode="monte_carlo", samples=4000, seed=3)
    assert abs(mc.value - exact) <= 3 * mc.stderr
    assert mc.n_patterns == 4000


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_orthogonal_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    X = rng.standard_normal((3, 4))
    assert conjugated_nabla(X, Q) == pytest.approx(nabla(X).value, rel=1e-10)


def test_limits():
    with pytest.raises(ValueError):
        nabla(np.eye(EXHAUSTIVE_LIMIT + 1))
    with pytest.raises(ValueError):
        nabla(np.eye(2), mode="guess")


def test_gap_rows():
    rows = unitary_gap_experiment([1, 2, 3])
    assert [r["n"] for r in rows] == [2, 4, 8]
    assert rows[1]["gap"] == pytest.approx(canonical_value(4) - WALSH[2])
    assert all(r["mode"] == "exhaustive" for r in rows)


@pytest.mark.parametrize("m", [1, 3, 5])
def test_l2_reduction(m):
    rng = np.random.default_rng(m)
    out = l2_reduction_check(m, [rng.standard_normal(1 << m) for _ in range(6)])
    assert out["residual"] < 1e-12 and out["linearity_residual"] < 1e-12
    assert out["shift"] == pytest.approx(m * math.log(2) / 2)
