import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from twistlab import _kernels_py, kernels
from twistlab.quasimaps import kalton_peck
from twistlab.vecspace import lp, norm

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")


def _compiled():
    from twistlab import _kernels
    return _kernels


def defects_oracle(X, E, p, w):
    """Direct loop over patterns with the scalar map."""
    sp = lp(X.shape[1], p, w)
    K = lambda v: kalton_peck(sp, v) if np.any(v) else np.zeros_like(v)
    return np.array([norm(sp, K(e @ X) - sum(ei * K(x) for ei, x in zip(e, X))) for e in E])


@needs_compiled
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 7), st.sampled_from([1.0, 1.5, 2.0, 3.0]), st.integers(0, 2 ** 31))
def test_backends_agree(n, d, p, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    w = rng.uniform(0.5, 2.0, d)
    E = rng.choice(np.array([-1, 1], dtype=np.int8), size=(9, n))
    a = kernels.kp_defects(X, E, p, w, backend=_compiled())
    b = kernels.kp_defects(X, E, p, w, backend=_kernels_py)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
    assert np.allclose(a, defects_oracle(X, E, p, w), rtol=1e-10, atol=1e-12)
    ea = kernels.kp_defects_exhaustive(X, p, w, backend=_compiled())
    eb = kernels.kp_defects_exhaustive(X, p, w, backend=_kernels_py)
    assert ea.shape == (2 ** n,) and np.allclose(ea, eb, rtol=1e-12, atol=1e-12)


@needs_compiled
def test_rows_agree_and_zero_row():
    Z = np.array([[0.0, 0.0, 0.0], [1.0, -2.0, 0.0]])
    w = np.ones(3)
    a = kernels.kalton_peck_rows(Z, 2.0, w, backend=_compiled())
    b = kernels.kalton_peck_rows(Z, 2.0, w, backend=_kernels_py)
    assert np.allclose(a, b) and np.all(a[0] == 0)


def test_exhaustive_bit_convention():
    X = np.eye(3)
    # pattern index 5 = bits 0 and 2 set = signs (-1, +1, -1)
    full = kernels.kp_defects_exhaustive(X)
    one = kernels.kp_defects(X, np.array([[-1, 1, -1]], dtype=np.int8))
    assert full[5] == pytest.approx(one[0])


def test_input_validation():
    with pytest.raises(ValueError):
        kernels.kp_defects(np.eye(2), np.ones((3, 3), dtype=np.int8))
    with pytest.raises(ValueError):
        kernels.kalton_peck_rows(np.ones(3))
    with pytest.raises(ValueError):
        kernels.kalton_peck_rows(np.ones((2, 3)), 2.0, np.ones(2))


def test_environment_forces_fallback():
    import subprocess
    import sys
    code = "import twistlab; print(twistlab.BACKEND)"
    env = {**__import__("os").environ, "TWISTLAB_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"
