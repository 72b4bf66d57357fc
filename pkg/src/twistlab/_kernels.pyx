# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the sign-average and Kalton-Peck hot loops.

Every function here has a numpy twin in ``_kernels_py`` with the same
signature; ``twistlab.kernels`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, pow, sqrt

cnp.import_array()


cdef inline double _wnorm(const double* r, const double[::1] w, Py_ssize_t d, double p) noexcept nogil:
    cdef Py_ssize_t k
    cdef double acc = 0.0, a
    if p == 2.0:
        for k in range(d):
            acc += w[k] * r[k] * r[k]
        return sqrt(acc)
    if p == 1.0:
        for k in range(d):
            acc += w[k] * fabs(r[k])
        return acc
    for k in range(d):
        a = fabs(r[k])
        if a > 0.0:
            acc += w[k] * pow(a, p)
    return pow(acc, 1.0 / p)


cdef inline void _kp_inplace(double* z, const double[::1] w, Py_ssize_t d, double p) noexcept nogil:
    # z <- z * log(|z| / ||z||), with 0 log 0 = 0
    cdef Py_ssize_t k
    cdef double nrm = _wnorm(z, w, d, p)
    if nrm == 0.0:
        return
    cdef double lognrm = log(nrm)  # log differences: the ratio can underflow
    for k in range(d):
        if z[k] != 0.0:
            z[k] = z[k] * (log(fabs(z[k])) - lognrm)


def kalton_peck_rows(const double[:, ::1] Z, double p, const double[::1] w):
    """Row-wise Kalton-Peck map for a finite exponent ``p``."""
    cdef Py_ssize_t m = Z.shape[0], d = Z.shape[1], i, k
    out = np.array(Z, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(m):
            _kp_inplace(&o[i, 0], w, d, p)
    return out


def kp_defects(const double[:, ::1] X, const signed char[:, ::1] E, double p, const double[::1] w):
    """Defect norms ``||K(sum e_i x_i) - sum e_i K(x_i)||`` for each sign row of ``E``."""
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], b = E.shape[0]
    cdef Py_ssize_t j, i, k
    KX_arr = kalton_peck_rows(X, p, w)
    cdef double[:, ::1] KX = KX_arr
    z_arr = np.zeros(d, dtype=np.float64)
    s_arr = np.zeros(d, dtype=np.float64)
    out = np.empty(b, dtype=np.float64)
    cdef double[::1] z = z_arr, s = s_arr, o = out
    cdef double e
    with nogil:
        for j in range(b):
            for k in range(d):
                z[k] = 0.0
                s[k] = 0.0
            for i in range(n):
                e = <double>E[j, i]
                for k in range(d):
                    z[k] += e * X[i, k]
                    s[k] += e * KX[i, k]
            _kp_inplace(&z[0], w, d, p)
            for k in range(d):
                z[k] -= s[k]
            o[j] = _wnorm(&z[0], w, d, p)
    return out


def _signed_sums(const double[:, ::1] A, Py_ssize_t lo, Py_ssize_t bits):
    """Rows ``sum_i e_i A[lo + i]`` for every pattern of ``bits`` signs (bit set = -1)."""
    idx = np.arange(1 << bits)
    E = np.where((idx[:, None] >> np.arange(bits)) & 1, -1.0, 1.0)
    return np.ascontiguousarray(E @ np.asarray(A)[lo:lo + bits])


def kp_defects_exhaustive(const double[:, ::1] X, double p, const double[::1] w):
    """Defect norms over all ``2**n`` sign patterns; bit ``i`` of the index set means eps_i = -1.

    The sign bits are split in a low and a high half with precomputed
    partial sums, so each pattern costs one addition per coordinate.
    """
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    if n > 30:
        raise ValueError("exhaustive enumeration limited to n <= 30")
    cdef Py_ssize_t total = (<Py_ssize_t>1) << n
    cdef Py_ssize_t b = n // 2
    cdef Py_ssize_t mask = ((<Py_ssize_t>1) << b) - 1
    cdef Py_ssize_t j, jl, jh, k
    KX_arr = kalton_peck_rows(X, p, w)
    cdef double[:, ::1] ZL = _signed_sums(X, 0, b), ZH = _signed_sums(X, b, n - b)
    cdef double[:, ::1] SL = _signed_sums(KX_arr, 0, b), SH = _signed_sums(KX_arr, b, n - b)
    z_arr = np.zeros(d, dtype=np.float64)
    out = np.empty(total, dtype=np.float64)
    cdef double[::1] z = z_arr, o = out
    with nogil:
        for j in range(total):
            jl = j & mask
            jh = j >> b
            for k in range(d):
                z[k] = ZL[jl, k] + ZH[jh, k]
            _kp_inplace(&z[0], w, d, p)
            for k in range(d):
                z[k] -= SL[jl, k] + SH[jh, k]
            o[j] = _wnorm(&z[0], w, d, p)
    return out
