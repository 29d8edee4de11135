"""Hermitian eigenvalue numerics: minimum eigenvalue with witness, PSD
verdicts, Hadamard products.

The eigensolver is a cyclic Jacobi iteration with complex rotations, chosen
over tridiagonalization because it is simple to make bit-stable and accurate
enough near zero for the matrix sizes that occur here (n <= 256 nominal).
A compiled kernel is used when available; the pure NumPy kernel runs the
identical operation sequence, so results do not depend on which one loaded.
Set BIDISK_PURE=1 to force the pure kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ._defaults import TOL

if os.environ.get("BIDISK_PURE"):
    from . import _jacobi_py as _backend
else:
    try:
        from . import _jacobi_cy as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _jacobi_py as _backend


def backend_name() -> str:
    """'compiled' or 'python', whichever kernel was selected at import."""
    return _backend.BACKEND


#: Off-diagonal Frobenius norm target, relative to the matrix scale.
OFF_TOL = 1e-13

_MAX_SWEEPS = 60
_MAX_DIM = 1089  # hard guard; accuracy/speed envelope is documented for n <= 256


class ConvergenceError(ArithmeticError):
    """The Jacobi iteration failed to reach the off-diagonal target."""


def _as_hermitian_parts(h, herm_tol: float = 1e-10):
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > _MAX_DIM:
        raise ValueError(f"matrix dimension {h.shape[0]} exceeds the supported cap {_MAX_DIM}")
    scale = float(np.abs(h).max()) if h.size else 0.0
    dev = float(np.abs(h - h.conj().T).max())
    if dev > herm_tol * max(1.0, scale):
        raise ValueError(
            f"matrix is not Hermitian to tolerance: deviation {dev:g} "
            f"against scale {scale:g}")
    hs = (h + h.conj().T) / 2.0
    return (np.ascontiguousarray(hs.real), np.ascontiguousarray(hs.imag), scale)


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Full Hermitian eigendecomposition (values ascending, unitary columns).

    The input is symmetrized as (H + H*)/2 after a Hermitian-deviation check.
    Sweeps run until every off-diagonal modulus is below
    OFF_TOL * scale / n, which bounds the off-diagonal Frobenius norm by
    OFF_TOL * scale.
    """
    a_re, a_im, scale = _as_hermitian_parts(h)
    n = a_re.shape[0]
    v_re = np.eye(n)
    v_im = np.zeros((n, n))
    if scale > 0.0:
        tau_elem = OFF_TOL * scale / n
        sweeps = _backend.jacobi_cycle(a_re, a_im, v_re, v_im,
                                       tau_elem * tau_elem, _MAX_SWEEPS)
        if sweeps < 0:
            raise ConvergenceError(
                f"no convergence after {_MAX_SWEEPS} sweeps at dimension {n}")
    vals = np.diagonal(a_re).copy()
    order = np.argsort(vals, kind="stable")
    vecs = (np.asarray(v_re) + 1j * np.asarray(v_im))[:, order]
    return vals[order], vecs


def eigen_min(h) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit witness eigenvector."""
    vals, vecs = eigh(h)
    return float(vals[0]), vecs[:, 0].copy()


@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a positivity test.

    ``verdict`` is "psd" iff min_eigenvalue >= -tol * max(1, scale) where
    ``scale`` is the largest entry modulus of the input; the absolute floor
    keeps tiny matrices from passing on noise, the relative part tracks Pick
    matrices that grow toward the boundary.
    """

    min_eigenvalue: float
    witness: np.ndarray
    scale: float
    tol: float
    verdict: str

    @property
    def is_psd(self) -> bool:
        return self.verdict == "psd"


def is_psd(h, tol: float = TOL) -> PsdVerdict:
    """PSD verdict with witness for a Hermitian matrix."""
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    h = np.asarray(h, dtype=complex)
    scale = float(np.abs(h).max()) if h.size else 0.0
    lam, vec = eigen_min(h)
    verdict = "psd" if lam >= -tol * max(1.0, scale) else "not_psd"
    return PsdVerdict(min_eigenvalue=lam, witness=vec, scale=scale,
                      tol=tol, verdict=verdict)


def hadamard(a, b) -> np.ndarray:
    """Entrywise product; PSD inputs give a PSD product (Schur's theorem)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b
