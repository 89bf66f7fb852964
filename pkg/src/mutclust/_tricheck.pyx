# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled triangle-violation kernels.

Scans all triples (u, v, z) with u < v and z distinct from both for
violations of x[u,v] <= x[u,z] + x[z,v] without materializing the n^3
violation tensor.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True


def scan(double[:, ::1] x, double threshold):
    """All triples (u, v, z) with u < v, z distinct, and
    x[u,v] - x[u,z] - x[z,v] > threshold.  Returned unordered.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t u, v, z
    cdef Py_ssize_t count = 0
    cdef double viol

    with nogil:
        for u in range(n):
            for v in range(u + 1, n):
                for z in range(n):
                    if z == u or z == v:
                        continue
                    viol = x[u, v] - x[u, z] - x[z, v]
                    if viol > threshold:
                        count += 1

    out_u = np.empty(count, dtype=np.int32)
    out_v = np.empty(count, dtype=np.int32)
    out_z = np.empty(count, dtype=np.int32)
    out_viol = np.empty(count, dtype=np.float64)
    cdef int[::1] mu = out_u
    cdef int[::1] mv = out_v
    cdef int[::1] mz = out_z
    cdef double[::1] mviol = out_viol
    cdef Py_ssize_t k = 0

    if count:
        with nogil:
            for u in range(n):
                for v in range(u + 1, n):
                    for z in range(n):
                        if z == u or z == v:
                            continue
                        viol = x[u, v] - x[u, z] - x[z, v]
                        if viol > threshold:
                            mu[k] = <int> u
                            mv[k] = <int> v
                            mz[k] = <int> z
                            mviol[k] = viol
                            k += 1
    return out_u, out_v, out_z, out_viol


def max_violation(double[:, ::1] x):
    """Largest x[u,v] - x[u,z] - x[z,v] over valid triples; 0.0 if n < 3."""
    cdef Py_ssize_t n = x.shape[0]
    if n < 3:
        return 0.0
    cdef Py_ssize_t u, v, z
    cdef double best = -1e308
    cdef double viol
    with nogil:
        for u in range(n):
            for v in range(u + 1, n):
                for z in range(n):
                    if z == u or z == v:
                        continue
                    viol = x[u, v] - x[u, z] - x[z, v]
                    if viol > best:
                        best = viol
    return best
