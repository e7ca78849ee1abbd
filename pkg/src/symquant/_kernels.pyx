# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see ``_pykernels`` for the contract)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, pow, sqrt, hypot, fabs

cnp.import_array()

NAME = "cython"


def rate_moments(const double[::1] delta, double alpha):
    cdef Py_ssize_t i, n = delta.shape[0]
    cdef double half = 0.5 * alpha, s = 0.0, m2 = 0.0, mean, d
    cdef double[::1] f = np.empty(n)
    cdef bint square = alpha == 2.0
    with nogil:
        for i in range(n):
            d = 2.0 + 2.0 * cos(delta[i])
            f[i] = d if square else pow(d, half)
            s += f[i]
        mean = s / n
        for i in range(n):
            d = f[i] - mean
            m2 += d * d
    return mean, m2


def born_moments(xy):
    cdef const double[:, ::1] x = np.ascontiguousarray(xy, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0, m2 = 0.0, mean, d
    with nogil:
        for i in range(n):
            s += x[i, 0] * x[i, 0] + x[i, 1] * x[i, 1]
        mean = s / n
        for i in range(n):
            d = x[i, 0] * x[i, 0] + x[i, 1] * x[i, 1] - mean
            m2 += d * d
    return mean, m2


cdef inline void _mul(const double[:, :, ::1] g, double a0, double a1,
                      double b0, double b1, double* out) noexcept nogil:
    cdef int i
    for i in range(2):
        out[i] = (g[i, 0, 0] * a0 * b0 + g[i, 0, 1] * a0 * b1
                  + g[i, 1, 0] * a1 * b0 + g[i, 1, 1] * a1 * b1)


def assoc_residual(gamma, u, v, w):
    cdef const double[:, :, ::1] g = np.ascontiguousarray(gamma, dtype=np.float64).reshape(2, 2, 2)
    cdef const double[:, ::1] U = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[:, ::1] V = np.ascontiguousarray(v, dtype=np.float64)
    cdef const double[:, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t r, n = U.shape[0]
    cdef double uv[2]
    cdef double left[2]
    cdef double vw[2]
    cdef double right[2]
    cdef double worst = 0.0, res
    with nogil:
        for r in range(n):
            _mul(g, U[r, 0], U[r, 1], V[r, 0], V[r, 1], uv)
            _mul(g, uv[0], uv[1], W[r, 0], W[r, 1], left)
            _mul(g, V[r, 0], V[r, 1], W[r, 0], W[r, 1], vw)
            _mul(g, U[r, 0], U[r, 1], vw[0], vw[1], right)
            res = hypot(left[0] - right[0], left[1] - right[1]) / (
                1.0 + hypot(U[r, 0], U[r, 1]) * hypot(V[r, 0], V[r, 1]) * hypot(W[r, 0], W[r, 1]))
            if res > worst or res != res:
                worst = res
    return worst


def network_moments(init, ops_out, ops_in, ops_coef, rand_edges, phases, det_ptr, det_edges):
    cdef const double complex[::1] a0 = np.ascontiguousarray(init, dtype=np.complex128)
    cdef const cnp.int64_t[::1] oo = np.ascontiguousarray(ops_out, dtype=np.int64)
    cdef const cnp.int64_t[::1] oi = np.ascontiguousarray(ops_in, dtype=np.int64)
    cdef const double complex[::1] oc = np.ascontiguousarray(ops_coef, dtype=np.complex128)
    cdef const cnp.int64_t[::1] re = np.ascontiguousarray(rand_edges, dtype=np.int64)
    cdef const double[:, ::1] ph = np.ascontiguousarray(phases, dtype=np.float64)
    cdef const cnp.int64_t[::1] dp = np.ascontiguousarray(det_ptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] de = np.ascontiguousarray(det_edges, dtype=np.int64)

    cdef Py_ssize_t n_edges = a0.shape[0], n_ops = oo.shape[0], n_rand = re.shape[0]
    cdef Py_ssize_t n_trials = ph.shape[0], n_det = dp.shape[0] - 1
    cdef Py_ssize_t t, k, e, d
    cdef double complex[::1] amp = np.empty(n_edges, dtype=np.complex128)
    cdef double complex[::1] rot = np.empty(n_edges, dtype=np.complex128)
    mean_arr = np.zeros(n_det)
    m2_arr = np.zeros(n_det)
    cdef double[::1] mean = mean_arr
    cdef double[::1] m2 = m2_arr
    cdef double complex tot
    cdef double p, delta
    with nogil:
        for t in range(n_trials):
            for e in range(n_edges):
                amp[e] = a0[e]
                rot[e] = 1.0
            for k in range(n_rand):
                rot[re[k]] = cos(ph[t, k]) + 1j * sin(ph[t, k])
            for k in range(n_ops):
                amp[oo[k]] = amp[oo[k]] + oc[k] * rot[oi[k]] * amp[oi[k]]
            for d in range(n_det):
                tot = 0.0
                for k in range(dp[d], dp[d + 1]):
                    tot = tot + rot[de[k]] * amp[de[k]]
                p = tot.real * tot.real + tot.imag * tot.imag
                # Welford update
                delta = p - mean[d]
                mean[d] += delta / (t + 1)
                m2[d] += delta * (p - mean[d])
    return mean_arr, m2_arr
