# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Cyclic Jacobi kernel for Hermitian matrices, compiled backend.

Operation-for-operation transcription of _jacobi_py.jacobi_cycle.  Compiled
with -ffp-contract=off so no fused multiply-adds appear and the output stays
bit-identical to the pure backend.  Keep the two files in sync.
"""

from libc.math cimport sqrt
from libc.stdlib cimport free, malloc

BACKEND = "compiled"


def jacobi_cycle(double[:, ::1] a_re, double[:, ::1] a_im,
                 double[:, ::1] v_re, double[:, ::1] v_im,
                 double thresh2, int max_sweeps):
    """See _jacobi_py.jacobi_cycle; identical contract and arithmetic."""
    cdef Py_ssize_t n = a_re.shape[0]
    if n < 2:
        return 0
    cdef double *buf = <double *> malloc(4 * n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double *cp_re = buf
    cdef double *cp_im = buf + n
    cdef double *cq_re = buf + 2 * n
    cdef double *cq_im = buf + 3 * n
    cdef Py_ssize_t sweep, p, q, k
    cdef bint rotated
    cdef double apq_re, apq_im, m2, m, ur, ui, app, aqq, tau, t, cs, sn
    try:
        for sweep in range(max_sweeps):
            rotated = False
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq_re = a_re[p, q]
                    apq_im = a_im[p, q]
                    m2 = apq_re * apq_re + apq_im * apq_im
                    if m2 <= thresh2:
                        continue
                    rotated = True
                    m = sqrt(m2)
                    ur = apq_re / m
                    ui = apq_im / m
                    app = a_re[p, p]
                    aqq = a_re[q, q]
                    tau = (aqq - app) / (2.0 * m)
                    if tau >= 0.0:
                        t = -1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = 1.0 / (-tau + sqrt(1.0 + tau * tau))
                    cs = 1.0 / sqrt(1.0 + t * t)
                    sn = t * cs
                    # columns: A <- A U
                    for k in range(n):
                        cp_re[k] = a_re[k, p]
                        cp_im[k] = a_im[k, p]
                        cq_re[k] = a_re[k, q]
                        cq_im[k] = a_im[k, q]
                    for k in range(n):
                        a_re[k, p] = cs * cp_re[k] + sn * (ur * cq_re[k] + ui * cq_im[k])
                        a_im[k, p] = cs * cp_im[k] + sn * (ur * cq_im[k] - ui * cq_re[k])
                        a_re[k, q] = cs * cq_re[k] - sn * (ur * cp_re[k] - ui * cp_im[k])
                        a_im[k, q] = cs * cq_im[k] - sn * (ur * cp_im[k] + ui * cp_re[k])
                    # rows: A <- U* A
                    for k in range(n):
                        cp_re[k] = a_re[p, k]
                        cp_im[k] = a_im[p, k]
                        cq_re[k] = a_re[q, k]
                        cq_im[k] = a_im[q, k]
                    for k in range(n):
                        a_re[p, k] = cs * cp_re[k] + sn * (ur * cq_re[k] - ui * cq_im[k])
                        a_im[p, k] = cs * cp_im[k] + sn * (ur * cq_im[k] + ui * cq_re[k])
                        a_re[q, k] = cs * cq_re[k] - sn * (ur * cp_re[k] + ui * cp_im[k])
                        a_im[q, k] = cs * cq_im[k] - sn * (ur * cp_im[k] - ui * cp_re[k])
                    # the 2x2 pivot block has a closed form; write it exactly
                    a_re[p, p] = app + t * m
                    a_im[p, p] = 0.0
                    a_re[q, q] = aqq - t * m
                    a_im[q, q] = 0.0
                    a_re[p, q] = 0.0
                    a_im[p, q] = 0.0
                    a_re[q, p] = 0.0
                    a_im[q, p] = 0.0
                    # eigenvector accumulation: V <- V U
                    for k in range(n):
                        cp_re[k] = v_re[k, p]
                        cp_im[k] = v_im[k, p]
                        cq_re[k] = v_re[k, q]
                        cq_im[k] = v_im[k, q]
                    for k in range(n):
                        v_re[k, p] = cs * cp_re[k] + sn * (ur * cq_re[k] + ui * cq_im[k])
                        v_im[k, p] = cs * cp_im[k] + sn * (ur * cq_im[k] - ui * cq_re[k])
                        v_re[k, q] = cs * cq_re[k] - sn * (ur * cp_re[k] - ui * cp_im[k])
                        v_im[k, q] = cs * cq_im[k] - sn * (ur * cp_im[k] + ui * cp_re[k])
            if not rotated:
                return sweep + 1
    finally:
        free(buf)
    return -1
