# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled soliton-residual kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef void _eq6(const double[:, :, ::1] a, double c, double[:, :, ::1] out,
               double[:, :, ::1] b, double[::1] u,
               double[:, ::1] left, double[:, ::1] right) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, p, q, r, t
    cdef double s1, s2, s3, acc

    for p in range(n):
        for r in range(n):
            for i in range(n):
                b[p, r, i] = a[p, r, i] + a[i, p, r] - a[r, i, p]
    for r in range(n):
        acc = 0.0
        for j in range(n):
            acc = acc + a[r, j, j]
        u[r] = acc

    for q in range(n):
        for i in range(n):
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for r in range(n):
                s1 = s1 + u[r] * b[q, r, i]
                for j in range(n):
                    s2 = s2 + a[q, j, r] * b[r, j, i]
                    s3 = s3 + b[j, r, i] * b[q, j, r]
            left[q, i] = -2.0 * s1 + 2.0 * s2 + s3
    for i in range(n):
        for t in range(n):
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for r in range(n):
                s1 = s1 + u[r] * b[i, r, t]
                for j in range(n):
                    s2 = s2 + a[i, j, r] * b[r, j, t]
                    s3 = s3 + b[i, j, r] * b[j, r, t]
            right[i, t] = -2.0 * s1 + 2.0 * s2 + s3

    for t in range(n):
        for p in range(n):
            for q in range(n):
                acc = 0.0
                for i in range(n):
                    acc = acc + a[i, p, t] * left[q, i] - a[i, q, t] * left[p, i] + a[p, q, i] * right[i, t]
                out[t, p, q] = c * a[q, p, t] + 0.25 * acc


def eq6_tensor(alpha, double c):
    cdef const double[:, :, ::1] a = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    out = np.empty((n, n, n))
    b = np.empty((n, n, n))
    u = np.empty(n)
    left = np.empty((n, n))
    right = np.empty((n, n))
    _eq6(a, c, out, b, u, left, right)
    return out


def eq6_fd_jacobian(base, templates, theta, double c, steps):
    cdef const double[:, :, :, ::1] tpl = np.ascontiguousarray(templates, dtype=np.float64)
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef const double[::1] hs = np.ascontiguousarray(steps, dtype=np.float64)
    cdef Py_ssize_t k = th.shape[0]
    cdef Py_ssize_t n = tpl.shape[1]
    cdef Py_ssize_t m = n * n * n
    cdef Py_ssize_t col, idx, x, y, z
    cdef double h

    alpha_np = np.array(base, dtype=np.float64, order="C")
    if k:
        alpha_np += np.tensordot(np.asarray(th), np.asarray(tpl), axes=1)
    cdef double[:, :, ::1] alpha = alpha_np
    cdef double[:, :, ::1] work = np.empty((n, n, n))
    cdef double[:, :, ::1] rp = np.empty((n, n, n))
    cdef double[:, :, ::1] rm = np.empty((n, n, n))
    cdef double[:, :, ::1] b = np.empty((n, n, n))
    cdef double[::1] u = np.empty(n)
    cdef double[:, ::1] left = np.empty((n, n))
    cdef double[:, ::1] right = np.empty((n, n))
    res_np = np.empty((n, n, n))
    cdef double[:, :, ::1] res = res_np
    jac_np = np.empty((m, k + 1))
    cdef double[:, ::1] jac = jac_np

    with nogil:
        _eq6(alpha, c, res, b, u, left, right)
        for col in range(k):
            h = hs[col]
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        work[x, y, z] = alpha[x, y, z] + h * tpl[col, x, y, z]
            _eq6(work, c, rp, b, u, left, right)
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        work[x, y, z] = alpha[x, y, z] - h * tpl[col, x, y, z]
            _eq6(work, c, rm, b, u, left, right)
            idx = 0
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        jac[idx, col] = (rp[x, y, z] - rm[x, y, z]) / (2.0 * h)
                        idx = idx + 1
        h = hs[k]
        _eq6(alpha, c + h, rp, b, u, left, right)
        _eq6(alpha, c - h, rm, b, u, left, right)
        idx = 0
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    jac[idx, k] = (rp[x, y, z] - rm[x, y, z]) / (2.0 * h)
                    idx = idx + 1
    return res_np.ravel(), jac_np
