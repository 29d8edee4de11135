"""Holomorphic functions on the bidisk as immutable expression trees.

Trees are built from constants, the two coordinate functions, Blaschke
factors, sums, products, scalar multiples, integer powers and composition
with a self-map.  Evaluation is exact for polynomial trees up to rounding and
vectorizes over NumPy arrays.

Self-maps carry a sup-norm certificate.  The syntactic certificate is an l1
closure bound: a tree whose bound is <= 1 is built from sup-norm-preserving
constructors only (coordinates, Blaschke factors, products, convex
combinations, unimodular multiples, composition with a certified map), hence
its sup-norm is <= 1.  A grid estimate over the torus is available as a
non-certifying fallback and is recorded as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import mobius
from ._defaults import TORUS_GRID

_INF = math.inf
_CERT_SLACK = 1e-12  # absorbs rounding in convex weights like 3 * (1/3)


class CertificationError(ValueError):
    """A self-map coordinate failed the syntactic sup-norm certificate."""

    def __init__(self, message: str, offending=None):
        super().__init__(message)
        self.offending = offending


class Expr:
    """Base class; operator sugar builds trees from trees and scalars."""

    __slots__ = ()

    def __add__(self, other):
        return Sum((self, _wrap(other)))

    def __radd__(self, other):
        return Sum((_wrap(other), self))

    def __sub__(self, other):
        return Sum((self, Scale(-1.0, _wrap(other))))

    def __rsub__(self, other):
        return Sum((_wrap(other), Scale(-1.0, self)))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(complex(other), self)
        return Prod((self, other))

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Scale(complex(other), self)
        return Prod((other, self))

    def __truediv__(self, other):
        if not isinstance(other, (int, float, complex)):
            raise TypeError("division only by constants")
        return Scale(1.0 / complex(other), self)

    def __neg__(self):
        return Scale(-1.0, self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise TypeError("powers must be non-negative integers")
        return Pow(self, k)


def _wrap(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(complex(x))


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Coord(Expr):
    axis: int  # 1 or 2

    def __post_init__(self):
        if self.axis not in (1, 2):
            raise ValueError("coordinate axis must be 1 or 2")


@dataclass(frozen=True)
class Blaschke(Expr):
    center: complex
    axis: int

    def __post_init__(self):
        mobius.check_disk(self.center)
        if self.axis not in (1, 2):
            raise ValueError("coordinate axis must be 1 or 2")


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Scale(Expr):
    coeff: complex
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Compose(Expr):
    outer: Expr
    inner: "SelfMap"


Z1 = Coord(1)
Z2 = Coord(2)
ZERO = Const(0j)
ONE = Const(1 + 0j)


def evaluate(f: Expr, z1, z2):
    """Evaluate ``f`` at coordinates ``z1``, ``z2`` (scalars or same-shape arrays)."""
    if isinstance(f, Const):
        if isinstance(z1, np.ndarray):
            return np.full(z1.shape, f.value)
        return f.value
    if isinstance(f, Coord):
        return z1 if f.axis == 1 else z2
    if isinstance(f, Blaschke):
        return mobius.blaschke(f.center, z1 if f.axis == 1 else z2)
    if isinstance(f, Sum):
        acc = evaluate(f.terms[0], z1, z2)
        for t in f.terms[1:]:
            acc = acc + evaluate(t, z1, z2)
        return acc
    if isinstance(f, Prod):
        acc = evaluate(f.factors[0], z1, z2)
        for t in f.factors[1:]:
            acc = acc * evaluate(t, z1, z2)
        return acc
    if isinstance(f, Scale):
        return f.coeff * evaluate(f.arg, z1, z2)
    if isinstance(f, Pow):
        return evaluate(f.base, z1, z2) ** f.exponent
    if isinstance(f, Compose):
        w1 = evaluate(f.inner.psi1, z1, z2)
        w2 = evaluate(f.inner.psi2, z1, z2)
        return evaluate(f.outer, w1, w2)
    raise TypeError(f"not an expression node: {f!r}")


def eval_point(f: Expr, p) -> complex:
    z1, z2 = mobius.as_pair(p)
    return complex(evaluate(f, z1, z2))


def bidegree(f: Expr) -> tuple[float, float]:
    """Upper bound for the polynomial degree in each variable (inf for Blaschke)."""
    if isinstance(f, Const):
        return (0, 0)
    if isinstance(f, Coord):
        return (1, 0) if f.axis == 1 else (0, 1)
    if isinstance(f, Blaschke):
        return (_INF, 0) if f.axis == 1 else (0, _INF)
    if isinstance(f, Sum):
        degs = [bidegree(t) for t in f.terms]
        return (max(d[0] for d in degs), max(d[1] for d in degs))
    if isinstance(f, Prod):
        degs = [bidegree(t) for t in f.factors]
        return (sum(d[0] for d in degs), sum(d[1] for d in degs))
    if isinstance(f, Scale):
        return bidegree(f.arg)
    if isinstance(f, Pow):
        d = bidegree(f.base)
        return (d[0] * f.exponent, d[1] * f.exponent)
    if isinstance(f, Compose):
        d = bidegree(f.outer)
        d1 = bidegree(f.inner.psi1)
        d2 = bidegree(f.inner.psi2)
        return (d[0] * d1[0] + d[1] * d2[0], d[0] * d1[1] + d[1] * d2[1])
    raise TypeError(f"not an expression node: {f!r}")


def sup_bound(f: Expr) -> float:
    """The l1 closure bound; sup |f| <= sup_bound(f) on the bidisk.

    Coordinates and Blaschke factors are bounded by 1, sums by the sum of the
    term bounds, products by the product, and composition preserves the outer
    bound when the inner map is certified.
    """
    if isinstance(f, Const):
        return abs(f.value)
    if isinstance(f, (Coord, Blaschke)):
        return 1.0
    if isinstance(f, Sum):
        return sum(sup_bound(t) for t in f.terms)
    if isinstance(f, Prod):
        out = 1.0
        for t in f.factors:
            out *= sup_bound(t)
        return out
    if isinstance(f, Scale):
        return abs(f.coeff) * sup_bound(f.arg)
    if isinstance(f, Pow):
        return sup_bound(f.base) ** f.exponent
    if isinstance(f, Compose):
        if f.inner.certified:
            return sup_bound(f.outer)
        return _INF
    raise TypeError(f"not an expression node: {f!r}")


def find_offending(f: Expr):
    """Smallest subtree whose closure bound exceeds 1 (None if certified)."""
    if sup_bound(f) <= 1.0 + _CERT_SLACK:
        return None
    children: tuple[Expr, ...] = ()
    if isinstance(f, Sum):
        children = f.terms
    elif isinstance(f, Prod):
        children = f.factors
    elif isinstance(f, Scale):
        children = (f.arg,)
    elif isinstance(f, Pow):
        children = (f.base,)
    elif isinstance(f, Compose):
        children = (f.outer,)
    for c in children:
        hit = find_offending(c)
        if hit is not None:
            return hit
    return f


@dataclass(frozen=True)
class GridEstimate:
    """A recorded torus-grid maximum.  An estimate, never a certificate."""

    grid: int
    max_modulus: float


@dataclass(frozen=True)
class SelfMap:
    """A pair of holomorphic functions mapping the bidisk to itself.

    ``norm_certificate`` is either the string "by-construction" (each
    coordinate passes the syntactic closure bound) or a GridEstimate.
    """

    psi1: Expr
    psi2: Expr
    norm_certificate: Union[str, GridEstimate]

    @property
    def certified(self) -> bool:
        return self.norm_certificate == "by-construction"

    def apply(self, p) -> tuple[complex, complex]:
        z1, z2 = mobius.as_pair(p)
        return (complex(evaluate(self.psi1, z1, z2)), complex(evaluate(self.psi2, z1, z2)))

    def apply_arrays(self, z1, z2):
        return (evaluate(self.psi1, z1, z2), evaluate(self.psi2, z1, z2))


def certify(psi1: Expr, psi2: Expr) -> SelfMap:
    """Build a by-construction SelfMap, or raise naming the offending node."""
    for name, coord in (("psi1", psi1), ("psi2", psi2)):
        bound = sup_bound(coord)
        if not bound <= 1.0 + _CERT_SLACK:
            raise CertificationError(
                f"{name} fails the sup-norm closure certificate "
                f"(bound {bound:g} > 1); offending node: {find_offending(coord)!r}",
                offending=find_offending(coord))
    return SelfMap(psi1, psi2, "by-construction")


def selfmap_from_grid(psi1: Expr, psi2: Expr, grid: int = TORUS_GRID) -> SelfMap:
    """Admit a self-map on the strength of a torus-grid estimate only."""
    m = max(sup_norm_estimate(psi1, grid), sup_norm_estimate(psi2, grid))
    if m > 1.0 + 1e-12:
        raise CertificationError(
            f"grid estimate {m:g} exceeds 1; not admissible as a self-map")
    return SelfMap(psi1, psi2, GridEstimate(grid, m))


def sup_norm_estimate(f: Expr, grid: int = TORUS_GRID) -> float:
    """Max of |f| over a grid x grid lattice on the torus |z1| = |z2| = 1.

    This is a lower bound for the sup-norm over the bidisk (maximum modulus).
    """
    if grid < 8:
        raise ValueError("grid size must be at least 8")
    angles = 2.0 * np.pi * np.arange(grid) / grid
    ring = np.exp(1j * angles)
    zz1, zz2 = np.meshgrid(ring, ring, indexing="ij")
    vals = evaluate(f, zz1, zz2)
    if not isinstance(vals, np.ndarray):
        return abs(vals)
    return float(np.abs(vals).max())


def dilation(r: float) -> SelfMap:
    """The radial dilation (z1, z2) -> (r z1, r z2), certified by construction."""
    if not 0.0 < r < 1.0:
        raise ValueError("dilation radius must lie in (0, 1)")
    return certify(Scale(r, Z1), Scale(r, Z2))


def dilate(f: Expr, r: float) -> Expr:
    """Compose ``f`` with the radial dilation; bounded on the closed bidisk."""
    return Compose(f, dilation(r))


@dataclass(frozen=True)
class Triplet:
    """The (phi1, phi2, phi3) tuple feeding the kernel positivity conditions."""

    phi1: Expr
    phi2: Expr
    phi3: Expr

    def members(self) -> tuple[Expr, Expr, Expr]:
        return (self.phi1, self.phi2, self.phi3)


def product_triplet(psi: SelfMap) -> Triplet:
    """(psi1, psi2, psi1 psi2) for a certified self-map."""
    return Triplet(psi.psi1, psi.psi2, Prod((psi.psi1, psi.psi2)))


_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def scaled_triplet(psi: SelfMap) -> Triplet:
    """(psi1/sqrt2, psi2/sqrt2, psi1 psi2 / 2) for any self-map."""
    return Triplet(
        Scale(_INV_SQRT2, psi.psi1),
        Scale(_INV_SQRT2, psi.psi2),
        Scale(0.5, Prod((psi.psi1, psi.psi2))),
    )


# ---------------------------------------------------------------------------
# Random certified self-maps (sweep and search material)

def _random_center(gen, radius: float = 0.6) -> complex:
    r = radius * math.sqrt(gen.next_double())
    a = 2.0 * math.pi * gen.next_double()
    return complex(r * math.cos(a), r * math.sin(a))


def _random_unimodular(gen) -> complex:
    a = 2.0 * math.pi * gen.next_double()
    return complex(math.cos(a), math.sin(a))


def _random_certified_expr(gen, axes: tuple[int, ...], depth: int,
                           origin_fixing: bool) -> Expr:
    if depth <= 0:
        u = gen.next_double()
        axis = axes[int(gen.next_double() * len(axes)) % len(axes)]
        if origin_fixing or u < 0.5:
            return Coord(axis)
        return Blaschke(_random_center(gen), axis)
    u = gen.next_double()
    if u < 0.35:
        a = _random_certified_expr(gen, axes, depth - 1, origin_fixing)
        b = _random_certified_expr(gen, axes, depth - 1, origin_fixing)
        return Prod((a, b))
    if u < 0.70:
        t = gen.next_double()
        a = _random_certified_expr(gen, axes, depth - 1, origin_fixing)
        b = _random_certified_expr(gen, axes, depth - 1, origin_fixing)
        return Sum((Scale(t, a), Scale(1.0 - t, b)))
    if u < 0.90:
        return Scale(_random_unimodular(gen),
                     _random_certified_expr(gen, axes, depth - 1, origin_fixing))
    inner = dilation(0.5 + 0.4 * gen.next_double())
    return Compose(_random_certified_expr(gen, axes, depth - 1, origin_fixing), inner)


def random_selfmap(gen, depth: int = 2, origin_fixing: bool = False) -> SelfMap:
    """A random by-construction self-map; optionally fixing the origin.

    Origin-fixing trees avoid Blaschke leaves with nonzero center, and every
    combinator used (product, convex combination, unimodular multiple,
    composition with an origin-fixing dilation) preserves psi(0, 0) = (0, 0).
    """
    axes = (1, 2)
    return certify(
        _random_certified_expr(gen, axes, depth, origin_fixing),
        _random_certified_expr(gen, axes, depth, origin_fixing),
    )


def random_tensor_map(gen, max_factors: int = 2) -> SelfMap:
    """A random map (psi1(z1), psi2(z2)) built from Blaschke factors.

    Each coordinate is a unimodular multiple of a product of at most
    ``max_factors`` Blaschke factors in its own variable, so the pair meets
    the single-variable hypothesis that certifies the product triplet.
    """

    def one_axis(axis: int) -> Expr:
        k = 1 + int(gen.next_double() * max_factors) % max_factors
        factors = tuple(Blaschke(_random_center(gen), axis) for _ in range(k))
        body: Expr = factors[0] if k == 1 else Prod(factors)
        return Scale(_random_unimodular(gen), body)

    return certify(one_axis(1), one_axis(2))
