"""Szegő kernel of the bidisk Hardy space and Pick-matrix assembly.

The P-kind matrix discretizes the lower operator bound (the indefinite kernel
itself is positive), the Q-kind the upper bound (its complement against the
Szegő kernel is positive).  Entry orientation is A[i][j] = K(p_i, p_j) with K
conjugate-linear in the second argument, matching the quadratic-form expansion
over finite kernel combinations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import funcspace, mobius
from ._defaults import MAX_POINTS
from .funcspace import SelfMap, Triplet


def szego(lam, z) -> complex:
    """Reproducing kernel k_lam(z) = 1 / ((1 - conj(lam1) z1)(1 - conj(lam2) z2))."""
    l1, l2 = mobius.as_pair(lam)
    z1, z2 = mobius.as_pair(z)
    return 1.0 / ((1.0 - l1.conjugate() * z1) * (1.0 - l2.conjugate() * z2))


def phi(t: Triplet, z, lam) -> complex:
    """The indefinite kernel conj(phi1(lam)) phi1(z) + conj(phi2(lam)) phi2(z) - conj(phi3(lam)) phi3(z)."""
    z1, z2 = mobius.as_pair(z)
    l1, l2 = mobius.as_pair(lam)
    total = 0j
    for sign, f in ((1.0, t.phi1), (1.0, t.phi2), (-1.0, t.phi3)):
        total += sign * complex(funcspace.evaluate(f, l1, l2)).conjugate() \
            * complex(funcspace.evaluate(f, z1, z2))
    return total


@dataclass(frozen=True)
class PickMatrix:
    kind: str  # "P" or "Q"
    points: tuple[mobius.BidiskPoint, ...]
    entries: np.ndarray

    @property
    def size(self) -> int:
        return len(self.points)


def _coord_arrays(points) -> tuple[np.ndarray, np.ndarray]:
    pts = [mobius.as_pair(p) for p in points]
    return (np.array([p[0] for p in pts]), np.array([p[1] for p in pts]))


def _check_distinct(z1: np.ndarray, z2: np.ndarray) -> None:
    n = len(z1)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(z1[i] - z1[j]) <= 1e-12 and abs(z2[i] - z2[j]) <= 1e-12:
                raise ValueError(
                    f"points {i} and {j} coincide; duplicate points degenerate "
                    "the Pick matrix and poison the PSD witness")


def szego_gram(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """S[i, j] = k_{p_j}(p_i) for the coordinate arrays of a point list."""
    d1 = 1.0 - z1[:, None] * np.conjugate(z1)[None, :]
    d2 = 1.0 - z2[:, None] * np.conjugate(z2)[None, :]
    return 1.0 / (d1 * d2)


def phi_gram(t: Triplet, z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """F[i, j] = Phi(p_i, p_j) over the point list (conjugate-linear in j)."""
    v1 = np.atleast_1d(funcspace.evaluate(t.phi1, z1, z2)).astype(complex)
    v2 = np.atleast_1d(funcspace.evaluate(t.phi2, z1, z2)).astype(complex)
    v3 = np.atleast_1d(funcspace.evaluate(t.phi3, z1, z2)).astype(complex)
    return (np.outer(v1, np.conjugate(v1))
            + np.outer(v2, np.conjugate(v2))
            - np.outer(v3, np.conjugate(v3)))


def pick_matrix(kind: str, t: Triplet, points, max_points: int = MAX_POINTS) -> PickMatrix:
    """Assemble the P- or Q-kind Pick matrix of a triplet at distinct points.

    The result is Hermitian by construction: the lower triangle mirrors the
    conjugated upper triangle and the diagonal is real.  (Whole-matrix
    evaluation would leave FMA-induced asymmetry of order 1e-10 absolute when
    Szegő factors blow up near the boundary.)
    """
    if kind not in ("P", "Q"):
        raise ValueError(f"kind must be 'P' or 'Q', not {kind!r}")
    points = tuple(mobius.BidiskPoint(*mobius.as_pair(p)) for p in points)
    if not 1 <= len(points) <= max_points:
        raise ValueError(f"need 1..{max_points} points, got {len(points)}")
    z1, z2 = _coord_arrays(points)
    _check_distinct(z1, z2)
    s = szego_gram(z1, z2)
    f = phi_gram(t, z1, z2)
    entries = f * s if kind == "P" else (1.0 - f) * s
    upper = np.triu(entries, 1)
    herm = upper + upper.conj().T + np.diag(np.diagonal(entries).real)
    return PickMatrix(kind=kind, points=points, entries=herm)


def schur_ratio_gap(psi: SelfMap, points) -> float:
    """Max deviation between the Szegő-kernel ratio matrix and the Q-kind
    Pick matrix of the product triplet of ``psi``.

    The two agree identically: the reciprocal Szegő kernel at image points
    telescopes into the complement of the product-triplet kernel.
    """
    points = tuple(points)
    z1, z2 = _coord_arrays(points)
    _check_distinct(z1, z2)
    w1, w2 = psi.apply_arrays(z1, z2)
    w1 = np.atleast_1d(w1).astype(complex)
    w2 = np.atleast_1d(w2).astype(complex)
    ratio = szego_gram(z1, z2) / szego_gram(w1, w2)
    # raw assembly (no Hermitian mirroring) keeps this a pure identity check
    t = funcspace.product_triplet(psi)
    q = (1.0 - phi_gram(t, z1, z2)) * szego_gram(z1, z2)
    return float(np.abs(ratio - q).max())
