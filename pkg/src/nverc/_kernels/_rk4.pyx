# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lab-frame RK4 kernel for the 3-level system.

Identical contract to ``nverc._kernels.pyfallback.rk4_lab_segment``; the
3x3 matrix algebra is fully unrolled so one step costs a few hundred FLOPs
with no Python overhead.
"""

import numpy as np

cimport cython
from libc.math cimport cos


ctypedef double complex cplx


cdef inline void _matmul_acc(const cplx* a, const cplx* b, cplx* out) nogil:
    # out = a @ b for row-major 3x3
    cdef int i, j
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (a[3 * i + 0] * b[0 + j]
                              + a[3 * i + 1] * b[3 + j]
                              + a[3 * i + 2] * b[6 + j])


cdef inline void _ht(const cplx* mihs, const cplx* miax, const cplx* miay,
                     double wc, double alpha, double beta, double t,
                     cplx* out) nogil:
    cdef double cx = cos(wc * t - alpha)
    cdef double cy = cos(wc * t - beta)
    cdef int k
    for k in range(9):
        out[k] = mihs[k] + cx * miax[k] + cy * miay[k]


def rk4_lab_segment(hs, ax, ay, double wc, double alpha, double beta,
                    double t0, double duration, long n_steps, u0):
    """Propagate ``u0`` over ``[t0, t0 + duration]`` with ``n_steps`` RK4 steps."""
    if n_steps <= 0:
        raise ValueError("n_steps must be positive")

    cdef cplx[:, ::1] hs_v = np.ascontiguousarray(hs, dtype=complex)
    cdef cplx[:, ::1] ax_v = np.ascontiguousarray(ax, dtype=complex)
    cdef cplx[:, ::1] ay_v = np.ascontiguousarray(ay, dtype=complex)
    out_arr = np.array(u0, dtype=complex, order="C", copy=True)
    cdef cplx[:, ::1] u_v = out_arr

    cdef cplx mihs[9]
    cdef cplx miax[9]
    cdef cplx miay[9]
    cdef cplx u[9]
    cdef cplx m[9]
    cdef cplx k1[9]
    cdef cplx k2[9]
    cdef cplx k3[9]
    cdef cplx k4[9]
    cdef cplx tmp[9]

    cdef int i, j, k
    cdef long step
    cdef double h = duration / n_steps
    cdef double t
    cdef cplx mi = -1j

    for i in range(3):
        for j in range(3):
            mihs[3 * i + j] = mi * hs_v[i, j]
            miax[3 * i + j] = mi * ax_v[i, j]
            miay[3 * i + j] = mi * ay_v[i, j]
            u[3 * i + j] = u_v[i, j]

    with nogil:
        for step in range(n_steps):
            t = t0 + step * h
            # k1 = M(t) u
            _ht(mihs, miax, miay, wc, alpha, beta, t, m)
            _matmul_acc(m, u, k1)
            # k2, k3 share M(t + h/2)
            _ht(mihs, miax, miay, wc, alpha, beta, t + 0.5 * h, m)
            for k in range(9):
                tmp[k] = u[k] + 0.5 * h * k1[k]
            _matmul_acc(m, tmp, k2)
            for k in range(9):
                tmp[k] = u[k] + 0.5 * h * k2[k]
            _matmul_acc(m, tmp, k3)
            # k4 = M(t + h) (u + h k3)
            _ht(mihs, miax, miay, wc, alpha, beta, t + h, m)
            for k in range(9):
                tmp[k] = u[k] + h * k3[k]
            _matmul_acc(m, tmp, k4)
            for k in range(9):
                u[k] = u[k] + (h / 6.0) * (k1[k] + 2.0 * (k2[k] + k3[k]) + k4[k])

    for i in range(3):
        for j in range(3):
            u_v[i, j] = u[3 * i + j]
    return out_arr
