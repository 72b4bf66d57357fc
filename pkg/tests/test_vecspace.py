import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from twistlab.vecspace import (DimensionError, SpaceSpec, align, dlp, lp, norm, refine, sum_norm, sup,
                               weighted_lp_norm)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_weighted_lp_examples():
    assert norm(lp(2, 2.0), [3.0, 4.0]) == pytest.approx(5.0)
    assert norm(lp(2, 1.0, [2.0, 1.0]), [1.0, -1.0]) == pytest.approx(3.0)
    # weight sits inside the power
    assert norm(lp(2, 2.0, [4.0, 1.0]), [1.0, 0.0]) == pytest.approx(2.0)
    assert norm(lp(2, math.inf, [2.0, 1.0]), [1.0, -1.5]) == pytest.approx(2.0)


def test_sup_ignores_weights_and_forces_inf():
    s = sup(3)
    assert math.isinf(s.p)
    assert norm(s, [1.0, -7.0, 2.0]) == 7.0


def test_discretized_norm_uses_cell_measure():
    assert norm(dlp(2, 2.0), np.ones(4)) == pytest.approx(1.0)
    assert norm(dlp(1, 1.0), [2.0, 0.0]) == pytest.approx(1.0)


@given(arrays(float, 8, elements=finite), st.sampled_from([1, 2, 4]), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_refinement_preserves_discretized_norm(x, k, p):
    assert norm(dlp(3, p), x) == pytest.approx(norm(dlp(3, p), refine(x, k)), rel=1e-12, abs=1e-300)


@given(arrays(float, 5, elements=finite), st.floats(-10, 10, allow_nan=False))
def test_homogeneity(x, c):
    sp = lp(5, 3.0, [1, 2, 3, 4, 5])
    assert norm(sp, c * x) == pytest.approx(abs(c) * norm(sp, x), rel=1e-12, abs=1e-9)


def test_overflow_safe():
    assert weighted_lp_norm(np.array([1e300, 1e300]), 3.0) == pytest.approx(1e300 * 2 ** (1 / 3))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        norm(lp(3), [1.0, 2.0])
    with pytest.raises(DimensionError):
        norm(dlp(2), np.ones(3))
    with pytest.raises(ValueError):
        SpaceSpec("WeightedLp", 2.0, weights=(1.0, -1.0))
    with pytest.raises(ValueError):
        lp(2, 0.5)
    with pytest.raises(ValueError):
        norm(lp(2), [np.nan, 1.0])


def test_json_roundtrip():
    for s in (lp(3, 1.5, [1, 2, 3]), sup(4), dlp(3, 4.0)):
        assert SpaceSpec.from_json(s.to_json()) == s


def test_align():
    a, b = align(np.array([1.0, 2.0]), np.arange(4.0))
    assert a.tolist() == [1.0, 1.0, 2.0, 2.0] and b.size == 4


def test_sum_norm_bounds():
    rng = np.random.default_rng(0)
    couple = (lp(4, math.inf), lp(4, 1.0))
    for _ in range(5):
        x = rng.standard_normal(4)
        v = sum_norm(couple, x, solver_budget=50)
        assert v <= min(norm(couple[0], x), norm(couple[1], x)) + 1e-12
        # lower bound: the sum norm dominates the smaller norm up to the embedding constant
        assert v >= norm(couple[0], x) - 1e-12 or v >= norm(couple[1], x) / 4 - 1e-12
