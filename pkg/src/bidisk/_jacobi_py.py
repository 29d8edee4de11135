"""Cyclic Jacobi kernel for Hermitian matrices, pure NumPy backend.

The compiled backend (_jacobi_cy) implements the identical operation
sequence; every floating-point expression here has a literal counterpart
there, so the two backends produce bit-identical output.  Keep them in sync:
any change to an arithmetic expression must be mirrored.

The matrix is carried as separate real/imaginary arrays to pin down the
complex arithmetic to explicit real operations (complex division and library
|z| routines vary between runtimes; sqrt, +, -, *, / do not).
"""

from __future__ import annotations

from math import sqrt

BACKEND = "python"


def jacobi_cycle(a_re, a_im, v_re, v_im, thresh2: float, max_sweeps: int) -> int:
    """Run cyclic Jacobi sweeps in place until every pivot is below threshold.

    ``a_*`` is the Hermitian input (destroyed: becomes diagonal), ``v_*``
    accumulates the unitary (should start as the identity).  ``thresh2`` is
    the squared modulus below which a pivot is skipped.  Returns the number
    of sweeps performed, or -1 if max_sweeps elapsed without convergence.
    """
    n = a_re.shape[0]
    if n < 2:
        return 0
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq_re = float(a_re[p, q])
                apq_im = float(a_im[p, q])
                m2 = apq_re * apq_re + apq_im * apq_im
                if m2 <= thresh2:
                    continue
                rotated = True
                m = sqrt(m2)
                ur = apq_re / m
                ui = apq_im / m
                app = float(a_re[p, p])
                aqq = float(a_re[q, q])
                tau = (aqq - app) / (2.0 * m)
                if tau >= 0.0:
                    t = -1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + sqrt(1.0 + tau * tau))
                cs = 1.0 / sqrt(1.0 + t * t)
                sn = t * cs
                # columns: A <- A U  (U differs from I only in columns p, q)
                cp_re = a_re[:, p].copy()
                cp_im = a_im[:, p].copy()
                cq_re = a_re[:, q].copy()
                cq_im = a_im[:, q].copy()
                a_re[:, p] = cs * cp_re + sn * (ur * cq_re + ui * cq_im)
                a_im[:, p] = cs * cp_im + sn * (ur * cq_im - ui * cq_re)
                a_re[:, q] = cs * cq_re - sn * (ur * cp_re - ui * cp_im)
                a_im[:, q] = cs * cq_im - sn * (ur * cp_im + ui * cp_re)
                # rows: A <- U* A
                rp_re = a_re[p, :].copy()
                rp_im = a_im[p, :].copy()
                rq_re = a_re[q, :].copy()
                rq_im = a_im[q, :].copy()
                a_re[p, :] = cs * rp_re + sn * (ur * rq_re - ui * rq_im)
                a_im[p, :] = cs * rp_im + sn * (ur * rq_im + ui * rq_re)
                a_re[q, :] = cs * rq_re - sn * (ur * rp_re + ui * rp_im)
                a_im[q, :] = cs * rq_im - sn * (ur * rp_im - ui * rp_re)
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
                vp_re = v_re[:, p].copy()
                vp_im = v_im[:, p].copy()
                vq_re = v_re[:, q].copy()
                vq_im = v_im[:, q].copy()
                v_re[:, p] = cs * vp_re + sn * (ur * vq_re + ui * vq_im)
                v_im[:, p] = cs * vp_im + sn * (ur * vq_im - ui * vq_re)
                v_re[:, q] = cs * vq_re - sn * (ur * vp_re - ui * vp_im)
                v_im[:, q] = cs * vq_im - sn * (ur * vp_im + ui * vp_re)
        if not rotated:
            return sweep + 1
    return -1
