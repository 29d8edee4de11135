"""Truncated Hardy-space operator algebra on the bidisk.

The degree-N truncation carries the monomials z1^a z2^b, 0 <= a, b <= N,
ordered lexicographically by (a, b); the H^2 pairing makes them orthonormal,
so operators are plain matrices on coefficient vectors.

Two facts shape the implementation:

* the adjoint of a multiplication compression lowers degree, so products of
  the form T_f T_f* are exact on the N-block once the symbol coefficients up
  to degree N are exact; and
* rational symbols (Blaschke factors) are lowered to polynomials through
  truncated geometric series, whose dropped l1 mass is tracked as a ``tail``
  that must enter every tolerance built on top.

Identities involving the submodule projection are asserted on interior
blocks only (bidegree <= N - deg q1 - deg q2 - 1): top rows of the truncated
projection differ from the infinite-dimensional one, and the interior block
is where that leakage cannot reach.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import funcspace, mobius, psd, rng
from ._defaults import MAX_TRUNC_DEGREE
from .funcspace import (Blaschke, Compose, Const, Coord, Expr, Pow, Prod,
                        Scale, Sum, Triplet)
from .grammar import to_text


@dataclass(frozen=True)
class TruncatedSpace:
    """Monomial basis of bidegree <= degree in each variable."""

    degree: int

    def __post_init__(self):
        if not 0 <= self.degree <= MAX_TRUNC_DEGREE:
            raise ValueError(
                f"truncation degree {self.degree} outside 0..{MAX_TRUNC_DEGREE}; "
                f"a buffer of degree {self.degree} is not supported")

    @property
    def dim(self) -> int:
        return (self.degree + 1) ** 2

    def index(self, a: int, b: int) -> int:
        return a * (self.degree + 1) + b

    def exponents(self) -> list[tuple[int, int]]:
        n = self.degree
        return [(a, b) for a in range(n + 1) for b in range(n + 1)]


@dataclass(frozen=True)
class TruncOp:
    """A matrix on the truncated space, remembering how it was compressed."""

    space: TruncatedSpace
    matrix: np.ndarray
    recipe: str
    tail: float = 0.0

    def adjoint(self) -> "TruncOp":
        return TruncOp(self.space, self.matrix.conj().T,
                       f"adjoint({self.recipe})", self.tail)


# ---------------------------------------------------------------------------
# Polynomial lowering

@dataclass
class Poly2:
    """Coefficient window plus an l1 bound on everything it misses.

    ``coeffs[a, b]`` is the z1^a z2^b coefficient.  ``tail`` bounds, in l1,
    the dropped out-of-window mass plus any in-window coefficient error
    (composition with a map not fixing the origin folds high outer
    coefficients into low degrees).  It therefore also bounds the sup-norm
    error of the window against the true function on the closed bidisk.
    """

    coeffs: np.ndarray
    tail: float

    def l1(self) -> float:
        return float(np.abs(self.coeffs).sum())


def _zero(cap1: int, cap2: int) -> Poly2:
    return Poly2(np.zeros((cap1 + 1, cap2 + 1), dtype=complex), 0.0)


def _const(c: complex, cap1: int, cap2: int) -> Poly2:
    p = _zero(cap1, cap2)
    p.coeffs[0, 0] = c
    return p


def _add(p: Poly2, q: Poly2) -> Poly2:
    return Poly2(p.coeffs + q.coeffs, p.tail + q.tail)


def _scale(c: complex, p: Poly2) -> Poly2:
    return Poly2(c * p.coeffs, abs(c) * p.tail)


def _mul(p: Poly2, q: Poly2) -> Poly2:
    """Product with window cut; dropped mass and cross terms feed the tail."""
    cap1 = p.coeffs.shape[0] - 1
    cap2 = p.coeffs.shape[1] - 1
    full = np.zeros((2 * cap1 + 1, 2 * cap2 + 1), dtype=complex)
    rows, cols = np.nonzero(p.coeffs)
    for a, b in zip(rows, cols):
        full[a:a + cap1 + 1, b:b + cap2 + 1] += p.coeffs[a, b] * q.coeffs
    window = full[:cap1 + 1, :cap2 + 1].copy()
    dropped = float(np.abs(full).sum() - np.abs(window).sum())
    tail = (p.tail * (q.l1() + q.tail) + p.l1() * q.tail + dropped)
    return Poly2(window, tail)


def _blaschke_series(center: complex, axis: int, cap1: int, cap2: int) -> Poly2:
    """b_w(z) = -w + (1 - |w|^2) sum_{k>=1} conj(w)^{k-1} z^k, cut at the cap.

    In-window coefficients are exact; the dropped l1 mass is
    |w|^cap (1 + |w|).
    """
    w = center
    cap = cap1 if axis == 1 else cap2
    p = _zero(cap1, cap2)
    one_minus = 1.0 - abs(w) ** 2
    if axis == 1:
        p.coeffs[0, 0] = -w
        for k in range(1, cap + 1):
            p.coeffs[k, 0] = one_minus * w.conjugate() ** (k - 1)
    else:
        p.coeffs[0, 0] = -w
        for k in range(1, cap + 1):
            p.coeffs[0, k] = one_minus * w.conjugate() ** (k - 1)
    p.tail = abs(w) ** cap * (1.0 + abs(w))
    return p


def lower(f: Expr, cap1: int, cap2: int) -> Poly2:
    """Taylor coefficients of ``f`` on the window [0..cap1] x [0..cap2].

    Exact for polynomial trees (degree overflow goes to the tail); Blaschke
    nodes and compositions contribute recorded tail mass as documented on
    Poly2.
    """
    if isinstance(f, Const):
        return _const(f.value, cap1, cap2)
    if isinstance(f, Coord):
        p = _zero(cap1, cap2)
        if f.axis == 1:
            if cap1 >= 1:
                p.coeffs[1, 0] = 1.0
            else:
                p.tail = 1.0
        else:
            if cap2 >= 1:
                p.coeffs[0, 1] = 1.0
            else:
                p.tail = 1.0
        return p
    if isinstance(f, Blaschke):
        return _blaschke_series(f.center, f.axis, cap1, cap2)
    if isinstance(f, Sum):
        acc = lower(f.terms[0], cap1, cap2)
        for t in f.terms[1:]:
            acc = _add(acc, lower(t, cap1, cap2))
        return acc
    if isinstance(f, Prod):
        acc = lower(f.factors[0], cap1, cap2)
        for t in f.factors[1:]:
            acc = _mul(acc, lower(t, cap1, cap2))
        return acc
    if isinstance(f, Scale):
        return _scale(f.coeff, lower(f.arg, cap1, cap2))
    if isinstance(f, Pow):
        acc = _const(1.0, cap1, cap2)
        base = lower(f.base, cap1, cap2)
        for _ in range(f.exponent):
            acc = _mul(acc, base)
        return acc
    if isinstance(f, Compose):
        return _lower_compose(f, cap1, cap2)
    raise TypeError(f"not an expression node: {f!r}")


def _lower_compose(f: Compose, cap1: int, cap2: int) -> Poly2:
    outer = lower(f.outer, cap1, cap2)
    p1 = lower(f.inner.psi1, cap1, cap2)
    p2 = lower(f.inner.psi2, cap1, cap2)
    acc = _const(0.0, cap1, cap2)
    pow1: list[Poly2] = [_const(1.0, cap1, cap2)]
    pow2: list[Poly2] = [_const(1.0, cap1, cap2)]
    rows, cols = np.nonzero(outer.coeffs)
    order = np.lexsort((cols, rows))
    for k in order:
        a, b = int(rows[k]), int(cols[k])
        while len(pow1) <= a:
            pow1.append(_mul(pow1[-1], p1))
        while len(pow2) <= b:
            pow2.append(_mul(pow2[-1], p2))
        acc = _add(acc, _scale(outer.coeffs[a, b], _mul(pow1[a], pow2[b])))
    # the outer tail survives composition because the inner map sends the
    # bidisk into itself
    acc.tail += outer.tail
    return acc


# ---------------------------------------------------------------------------
# Compressions and operator combinations

def toeplitz(f: Expr, n: int) -> TruncOp:
    """Compression of multiplication by ``f`` to the degree-n truncation.

    Entry ((c, d), (a, b)) is the z1^c z2^d coefficient of f * z1^a z2^b,
    which only needs the symbol coefficients up to degree n; those are exact
    for polynomial symbols and carry the recorded lowering tail otherwise.
    """
    space = TruncatedSpace(n)
    poly = lower(f, n, n)
    m = np.zeros((space.dim, space.dim), dtype=complex)
    k = n + 1
    rows, cols = np.nonzero(poly.coeffs)
    for p, q in zip(rows, cols):
        c = poly.coeffs[p, q]
        a = np.arange(k - p)
        b = np.arange(k - q)
        src = (a[:, None] * k + b[None, :]).ravel()
        dst = ((a[:, None] + p) * k + (b[None, :] + q)).ravel()
        m[dst, src] += c
    return TruncOp(space, m, f"toeplitz({to_text(f)}, N={n})", poly.tail)


def defect_op(t: Triplet, n: int) -> TruncOp:
    """T_phi1 T_phi1* + T_phi2 T_phi2* - T_phi3 T_phi3* on the truncation.

    Each adjoint product is exact on the N-block for exact symbol
    coefficients (the adjoint lowers degree, so nothing escapes the space
    before the final compression).
    """
    t1 = toeplitz(t.phi1, n)
    t2 = toeplitz(t.phi2, n)
    t3 = toeplitz(t.phi3, n)
    m = (t1.matrix @ t1.matrix.conj().T
         + t2.matrix @ t2.matrix.conj().T
         - t3.matrix @ t3.matrix.conj().T)
    return TruncOp(t1.space, m, f"defect(N={n})", t1.tail + t2.tail + t3.tail)


def op_norm(op: TruncOp) -> float:
    """Largest |eigenvalue| of a Hermitian truncated operator.

    A lower bound for the infinite-dimensional operator norm; the truncation
    caveat (and any lowering tail) is recorded on the operator itself.
    """
    vals, _ = psd.eigh(op.matrix)
    return float(np.abs(vals).max()) if vals.size else 0.0


# ---------------------------------------------------------------------------
# Submodules of the q1 H^2 + q2 H^2 kind

@dataclass(frozen=True)
class SubmoduleSpec:
    """One finite Blaschke product per variable (zeros inside the disk,
    unimodular front constant); the degenerate empty product is the constant."""

    zeros1: tuple[complex, ...] = ()
    zeros2: tuple[complex, ...] = ()
    const1: complex = 1.0 + 0j
    const2: complex = 1.0 + 0j

    def __post_init__(self):
        for w in self.zeros1 + self.zeros2:
            mobius.check_disk(w)
        for c in (self.const1, self.const2):
            if abs(abs(c) - 1.0) > 1e-12:
                raise ValueError(f"front constant {c} is not unimodular")

    def q1(self) -> Expr:
        return _blaschke_product(self.zeros1, self.const1, axis=1)

    def q2(self) -> Expr:
        return _blaschke_product(self.zeros2, self.const2, axis=2)

    @property
    def degree1(self) -> int:
        return len(self.zeros1)

    @property
    def degree2(self) -> int:
        return len(self.zeros2)


def _blaschke_product(zeros: tuple[complex, ...], const: complex, axis: int) -> Expr:
    if not zeros:
        return Const(const)
    factors = tuple(Blaschke(w, axis) for w in zeros)
    body: Expr = factors[0] if len(factors) == 1 else Prod(factors)
    return body if const == 1.0 else Scale(const, body)


def inner_check(f: Expr, grid: int = 256) -> float:
    """Max | |f| - 1 | over a circle grid in each variable (inner diagnostics)."""
    angles = 2.0 * np.pi * np.arange(grid) / grid
    ring = np.exp(1j * angles)
    vals = funcspace.evaluate(f, ring, ring)
    if not isinstance(vals, np.ndarray):
        return abs(abs(vals) - 1.0)
    return float(np.abs(np.abs(vals) - 1.0).max())


_SV_CUTOFF = 1e-10


def _model_space_basis(zeros: tuple[complex, ...], n: int) -> np.ndarray:
    """Orthonormal basis of the truncated one-variable model space of the
    Blaschke product with the given zeros.

    The model space is spanned by the Szegő kernels at the zeros (derivative
    kernels for repeated zeros); truncating those vectors keeps their
    coefficients exact up to degree n.  Rank-revealing orthogonalization with
    the relative cutoff absorbs near-coincident zeros.
    """
    if not zeros:
        return np.zeros((n + 1, 0))
    cols = []
    seen: dict[complex, int] = {}
    p = np.arange(n + 1)
    for w in zeros:
        j = seen.get(w, 0)
        seen[w] = j + 1
        wbar = np.conjugate(w)
        # j-th derivative in conj(w) of the kernel vector (conj(w)^p)_p
        coeff = np.zeros(n + 1, dtype=complex)
        mask = p >= j
        fall = np.ones(n + 1)
        for step in range(j):
            fall = fall * (p - step)
        coeff[mask] = fall[mask] * wbar ** (p[mask] - j)
        cols.append(coeff)
    mat = np.column_stack(cols)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > _SV_CUTOFF * s[0])) if s.size and s[0] > 0.0 else 0
    return u[:, :rank]


def proj_submodule(spec: SubmoduleSpec, n: int) -> TruncOp:
    """Projection of the truncated space onto its rendering of q1 H^2 + q2 H^2.

    The orthogonal complement of the submodule is the tensor product of the
    two one-variable model spaces, which are finite dimensional (one kernel
    vector per Blaschke zero); the projection is the complement of the tensor
    of their truncated, orthonormalized kernel bases.  This is exactly
    idempotent by construction and reproduces the infinite-dimensional
    projection entrywise up to the kernel-vector truncation tails.

    A direct SVD span of the stacked multiplication columns cannot work here:
    on the truncation those columns are full rank (the weak direction sits at
    about |w|^(n+1), above any fixed cutoff at moderate n), so the span
    collapses to the whole space.
    """
    space = TruncatedSpace(n)
    q1 = _model_space_basis(spec.zeros1, n)
    q2 = _model_space_basis(spec.zeros2, n)
    k1 = q1 @ q1.conj().T
    k2 = q2 @ q2.conj().T
    m = np.eye(space.dim, dtype=complex) - np.kron(k1, k2)
    tail1 = max((abs(w) for w in spec.zeros1), default=0.0) ** (n + 1)
    tail2 = max((abs(w) for w in spec.zeros2), default=0.0) ** (n + 1)
    return TruncOp(space, m,
                   f"proj(q1 deg {spec.degree1}, q2 deg {spec.degree2}, N={n})",
                   tail1 + tail2)


def core_op(proj: TruncOp, n: int) -> TruncOp:
    """P - S1 P S1* - S2 P S2* + S12 P S12* with the truncated shifts."""
    if proj.space.degree != n:
        raise ValueError("projection was built on a different truncation")
    s1 = toeplitz(Coord(1), n).matrix
    s2 = toeplitz(Coord(2), n).matrix
    s12 = toeplitz(Prod((Coord(1), Coord(2))), n).matrix
    p = proj.matrix
    m = p - s1 @ p @ s1.conj().T - s2 @ p @ s2.conj().T + s12 @ p @ s12.conj().T
    return TruncOp(proj.space, m, f"core({proj.recipe})", proj.tail)


def rankK_core(etas, n: int) -> TruncOp:
    """sum_j sign_j (vec eta_j)(vec eta_j)* from truncated coefficient vectors.

    ``etas`` is a sequence of (expression, sign) pairs with sign in {+1, -1}.
    """
    space = TruncatedSpace(n)
    m = np.zeros((space.dim, space.dim), dtype=complex)
    tail = 0.0
    for f, sign in etas:
        if sign not in (1, -1):
            raise ValueError("signature entries must be +1 or -1")
        poly = lower(f, n, n)
        v = poly.coeffs.reshape(-1)
        m += sign * np.outer(v, v.conj())
        tail += poly.tail
    return TruncOp(space, m, f"rank{len(tuple(etas))}-core(N={n})", tail)


def rank3_core(spec: SubmoduleSpec, n: int) -> TruncOp:
    """q1 (x) q1 + q2 (x) q2 - (q1 q2) (x) (q1 q2) on the truncation."""
    q1 = spec.q1()
    q2 = spec.q2()
    return rankK_core([(q1, 1), (q2, 1), (Prod((q1, q2)), -1)], n)


def interior_indices(n: int, bound: int) -> np.ndarray:
    """Basis indices with both exponents <= bound."""
    if bound < 0:
        return np.array([], dtype=int)
    k = n + 1
    idx = [a * k + b for a in range(bound + 1) for b in range(bound + 1)]
    return np.array(idx, dtype=int)


def interior_agreement(spec: SubmoduleSpec, n: int) -> float:
    """Operator norm of core_op(proj) - rank3_core on the interior block
    (bidegree <= N - deg q1 - deg q2 - 1)."""
    bound = n - spec.degree1 - spec.degree2 - 1
    idx = interior_indices(n, bound)
    if idx.size == 0:
        raise ValueError(f"no interior block at N={n} for this submodule")
    diff = (core_op(proj_submodule(spec, n), n).matrix
            - rank3_core(spec, n).matrix)[np.ix_(idx, idx)]
    vals, _ = psd.eigh(diff)
    return float(np.abs(vals).max())


# ---------------------------------------------------------------------------
# Reproducing kernels in the truncation

def kernel_vector(lam, n: int) -> np.ndarray:
    """Truncated coefficient vector of k_lam: entries conj(l1)^a conj(l2)^b."""
    l1, l2 = mobius.as_pair(lam)
    a = np.conjugate(l1) ** np.arange(n + 1)
    b = np.conjugate(l2) ** np.arange(n + 1)
    return np.outer(a, b).reshape(-1)


def eval_vector(coeffs: np.ndarray, n: int, z) -> complex:
    """Value at z of the function whose truncated coefficients are given."""
    z1, z2 = complex(z[0]), complex(z[1])
    a = z1 ** np.arange(n + 1)
    b = z2 ** np.arange(n + 1)
    return complex(np.outer(a, b).reshape(-1) @ coeffs)


def kernel_identity_check(spec: SubmoduleSpec, lam, n: int, sample_points) -> float:
    """Max deviation of k_lam(z) (Delta_M k_lam)(z) - (P_M k_lam)(z) over the
    samples, all points restricted to |coordinate| <= 0.5 so truncation tails
    stay geometric."""
    l1, l2 = mobius.as_pair(lam)
    if abs(l1) > 0.5 or abs(l2) > 0.5:
        raise ValueError("kernel point must satisfy |lambda_j| <= 0.5")
    delta = rank3_core(spec, n).matrix
    proj = proj_submodule(spec, n).matrix
    kv = kernel_vector((l1, l2), n)
    dk = delta @ kv
    pk = proj @ kv
    worst = 0.0
    for z in sample_points:
        z1, z2 = (z.as_pair() if isinstance(z, mobius.BidiskPoint)
                  else (complex(z[0]), complex(z[1])))
        if abs(z1) > 0.5 or abs(z2) > 0.5:
            raise ValueError("sample points must satisfy |z_j| <= 0.5")
        kval = 1.0 / ((1.0 - l1.conjugate() * z1) * (1.0 - l2.conjugate() * z2))
        lhs = kval * eval_vector(dk, n, (z1, z2))
        rhs = eval_vector(pk, n, (z1, z2))
        worst = max(worst, abs(lhs - rhs))
    return worst


def ball_sample(gen, count: int, radius: float = 0.5) -> list[tuple[complex, complex]]:
    """Deterministic sample of points with |z_j| <= radius (for kernel identity checks)."""
    out = []
    for _ in range(count):
        z1, z2 = rng.draw_point(gen)
        out.append((radius * z1, radius * z2))
    return out


# ---------------------------------------------------------------------------
# Text export

def export_matrix(op: TruncOp, fh) -> None:
    """Write the documented text format: dimension line, then row-major
    entries as comma-joined re,im pairs separated by spaces."""
    m = op.matrix
    fh.write(f"{m.shape[0]}\n")
    for row in m:
        fh.write(" ".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row) + "\n")


def read_matrix(fh) -> np.ndarray:
    """Inverse of export_matrix."""
    dim = int(fh.readline())
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        parts = fh.readline().split()
        for j, part in enumerate(parts):
            re_s, im_s = part.split(",")
            m[i, j] = complex(float(re_s), float(im_s))
    return m
