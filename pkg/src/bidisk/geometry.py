"""The indefinite pseudo-hyperbolic distance on the bidisk and its checkers.

d(z, w) combines the per-coordinate pseudo-hyperbolic distances d1, d2
through the signature (+, +, -):

    d^2 = d1^2 + d2^2 - (d1 d2)^2 = 1 - (1 - d1^2)(1 - d2^2).

The product form on the right is the computation route (it cannot cancel
catastrophically near the boundary); the radical form is kept as a
cross-check oracle.  The same quantity is the Krein self-pairing of the
embedding (z1, z2) -> (z1, z2, z1 z2) of the bidisk into C^3 with signature
(+, +, -), applied to Blaschke-shifted coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import classes, funcspace, mobius, rng
from .funcspace import Expr, SelfMap, sup_bound
from .mobius import BidiskAutomorphism, BidiskPoint

_SQRT2 = math.sqrt(2.0)


def _pair(p) -> tuple[complex, complex]:
    return mobius.as_pair(p)


def dist(z, w) -> float:
    """The indefinite pseudo-hyperbolic distance, in [0, 1)."""
    z1, z2 = _pair(z)
    w1, w2 = _pair(w)
    d1 = abs(mobius.blaschke(w1, z1))
    d2 = abs(mobius.blaschke(w2, z2))
    return math.sqrt(max(1.0 - (1.0 - d1 * d1) * (1.0 - d2 * d2), 0.0))


def dist_direct(z, w) -> float:
    """Cross-check route: sqrt(d1^2 + d2^2 - d1^2 d2^2) evaluated literally."""
    z1, z2 = _pair(z)
    w1, w2 = _pair(w)
    d1 = abs(mobius.blaschke(w1, z1))
    d2 = abs(mobius.blaschke(w2, z2))
    return math.sqrt(max(d1 * d1 + d2 * d2 - (d1 * d2) ** 2, 0.0))


def dist_arrays(z1, z2, w1, w2) -> np.ndarray:
    """Vectorized product-form distance over coordinate arrays."""
    d1sq = np.abs((z1 - w1) / (1.0 - np.conjugate(w1) * z1)) ** 2
    d2sq = np.abs((z2 - w2) / (1.0 - np.conjugate(w2) * z2)) ** 2
    return np.sqrt(np.maximum(1.0 - (1.0 - d1sq) * (1.0 - d2sq), 0.0))


def product_identity_gap(z, w) -> float:
    """|LHS - RHS| of 1 - d(z,w)^2 = (1 - d1^2)(1 - d2^2), with d from the
    radical route (the product route satisfies the identity by construction)."""
    z1, z2 = _pair(z)
    w1, w2 = _pair(w)
    d1 = abs(mobius.blaschke(w1, z1))
    d2 = abs(mobius.blaschke(w2, z2))
    d = dist_direct(z, w)
    return abs((1.0 - d * d) - (1.0 - d1 * d1) * (1.0 - d2 * d2))


def triangle_check(z, w, v) -> float:
    """d(z,w) - d(z,v) - d(v,w); never positive beyond rounding."""
    return dist(z, w) - dist(z, v) - dist(v, w)


def aut_invariance_gap(g: BidiskAutomorphism, z, w) -> float:
    """|d(g z, g w) - d(z, w)|."""
    return abs(dist(g.apply(z), g.apply(w)) - dist(z, w))


@dataclass(frozen=True)
class KreinVector:
    """A vector of C^3 carrying the signature (+, +, -)."""

    c1: complex
    c2: complex
    c3: complex


def krein_form(u: KreinVector, v: KreinVector) -> complex:
    """u1 conj(v1) + u2 conj(v2) - u3 conj(v3)."""
    return (u.c1 * v.c1.conjugate() + u.c2 * v.c2.conjugate()
            - u.c3 * v.c3.conjugate())


def krein_embed(z) -> KreinVector:
    """(z1, z2) -> (z1, z2, z1 z2); defined for closed-bidisk coordinates."""
    if isinstance(z, BidiskPoint):
        z1, z2 = z.as_pair()
    else:
        z1, z2 = complex(z[0]), complex(z[1])
    return KreinVector(z1, z2, z1 * z2)


def schwarz_pick_check(psi: SelfMap, z, w, mode: str = "general") -> float:
    """d(psi(z), psi(w)) - C d(z, w) with C = sqrt(2) (general) or 1 (q_class).

    The q_class constant applies when the product triplet of ``psi`` lies in
    the Q class; callers assert that (use ``q_class_evidence`` to record it).
    """
    factor = _mode_factor(mode)
    pz = psi.apply(z)
    pw = psi.apply(w)
    return dist(pz, pw) - factor * dist(z, w)


def _mode_factor(mode: str) -> float:
    if mode == "general":
        return _SQRT2
    if mode == "q_class":
        return 1.0
    raise ValueError(f"mode must be 'general' or 'q_class', not {mode!r}")


def q_class_evidence(psi: SelfMap, seed: int, trials: int = 50,
                     n_points: int = 6) -> classes.Certificate:
    """Search evidence that the product triplet of ``psi`` lies in Q."""
    cfg = classes.SearchConfig(seed=seed, trials=trials, n_points=n_points)
    return classes.violation_search(funcspace.product_triplet(psi), "Q", cfg)


def corollary_check(f: Expr, z, w) -> tuple[float, float]:
    """Gaps of the one-function contraction for certified |f| <= 1.

    Returns (sharp_gap, stated_gap) where sharp_gap uses the unsquared
    pseudo-hyperbolic distance of the two values (the consequence of the
    q_class contraction applied to (f, 0)) and stated_gap the squared form;
    since d < 1 the squared form is implied by, and weaker than, the sharp
    one.  Both are <= 0 up to rounding.
    """
    bound = sup_bound(f)
    if not bound <= 1.0 + 1e-12:
        raise funcspace.CertificationError(
            f"corollary_check requires a certified function (bound {bound:g} > 1)")
    fz = funcspace.eval_point(f, z)
    fw = funcspace.eval_point(f, w)
    denom = 1.0 - fw.conjugate() * fz
    if abs(denom) < 1e-15:
        raise mobius.DiskDomainError(
            "1 - conj(f(w)) f(z) vanished; |f| attains 1 inside the bidisk")
    move = abs((fz - fw) / denom)
    d = dist(z, w)
    return (move - d, move * move - d)


# ---------------------------------------------------------------------------
# Sweep drivers (shared by the CLI and the acceptance suite)

@dataclass
class MetricSweepResult:
    trials: int
    seed: int
    symmetry_gap: float
    triangle_gap: float
    identity_gap: float
    invariance_gap: float
    automorphisms: int

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "symmetry_gap": self.symmetry_gap,
            "triangle_gap": self.triangle_gap,
            "identity_gap": self.identity_gap,
            "invariance_gap": self.invariance_gap,
            "automorphisms": self.automorphisms,
        }


def metric_sweep(trials: int, seed: int, n_automorphisms: int = 10) -> MetricSweepResult:
    """Max gaps for symmetry, triangle, the product identity and invariance
    over ``trials`` random point triples and ``n_automorphisms`` random
    automorphisms applied to the first 1000 pairs."""
    gen = rng.substream(seed, 0)
    z1, z2, w1, w2 = rng.draw_pair_arrays(gen, trials)
    v1 = np.empty(trials, dtype=complex)
    v2 = np.empty(trials, dtype=complex)
    for k in range(trials):
        a, b = rng.draw_point(gen)
        v1[k] = a
        v2[k] = b

    dzw = dist_arrays(z1, z2, w1, w2)
    dwz = dist_arrays(w1, w2, z1, z2)
    symmetry = float(np.abs(dzw - dwz).max())

    dzv = dist_arrays(z1, z2, v1, v2)
    dvw = dist_arrays(v1, v2, w1, w2)
    triangle = float((dzw - dzv - dvw).max())

    d1sq = np.abs((z1 - w1) / (1.0 - np.conjugate(w1) * z1)) ** 2
    d2sq = np.abs((z2 - w2) / (1.0 - np.conjugate(w2) * z2)) ** 2
    direct = np.sqrt(np.maximum(d1sq + d2sq - d1sq * d2sq, 0.0))
    identity = float(np.abs((1.0 - direct * direct) - (1.0 - d1sq) * (1.0 - d2sq)).max())

    m = min(trials, 1000)
    invariance = 0.0
    for _ in range(n_automorphisms):
        g = mobius.random_automorphism(gen)
        gz1, gz2 = g.apply_arrays(z1[:m], z2[:m])
        gw1, gw2 = g.apply_arrays(w1[:m], w2[:m])
        gap = float(np.abs(dist_arrays(gz1, gz2, gw1, gw2) - dzw[:m]).max())
        invariance = max(invariance, gap)

    return MetricSweepResult(
        trials=trials, seed=seed, symmetry_gap=symmetry, triangle_gap=triangle,
        identity_gap=identity, invariance_gap=invariance,
        automorphisms=n_automorphisms)


@dataclass
class SweepResult:
    """Max gap of a pointwise inequality over sampled pairs, with argmax."""

    pairs: int
    seed: int
    mode: str
    max_gap: float
    argmax_z: tuple[float, float, float, float]
    argmax_w: tuple[float, float, float, float]
    near_equality_fraction: float
    automorphism_like: bool
    rows: list[tuple] = field(default_factory=list, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "seed": self.seed,
            "mode": self.mode,
            "max_gap": self.max_gap,
            "argmax_z": list(self.argmax_z),
            "argmax_w": list(self.argmax_w),
            "near_equality_fraction": self.near_equality_fraction,
            "automorphism_like": self.automorphism_like,
        }


_NEAR_EQUALITY = -1e-10


def schwarz_pick_sweep(psi: SelfMap, mode: str, pairs: int, seed: int,
                       boundary_bias: float = 0.0,
                       collect_rows: bool = False) -> SweepResult:
    """Sweep d(psi(z), psi(w)) - C d(z, w) over random pairs.

    ``automorphism_like`` flags a sample-wide near-equality in q_class mode;
    it is a detector only, no classification of the equality case is
    attempted.
    """
    factor = _mode_factor(mode)
    gen = rng.substream(seed, 0)
    z1, z2, w1, w2 = rng.draw_pair_arrays(gen, pairs, boundary_bias)
    p1, p2 = psi.apply_arrays(z1, z2)
    q1, q2 = psi.apply_arrays(w1, w2)
    p1 = np.atleast_1d(np.asarray(p1, dtype=complex))
    p2 = np.atleast_1d(np.asarray(p2, dtype=complex))
    q1 = np.atleast_1d(np.asarray(q1, dtype=complex))
    q2 = np.atleast_1d(np.asarray(q2, dtype=complex))
    if p1.shape != z1.shape:
        p1 = np.broadcast_to(p1, z1.shape)
        p2 = np.broadcast_to(p2, z1.shape)
        q1 = np.broadcast_to(q1, z1.shape)
        q2 = np.broadcast_to(q2, z1.shape)
    base = dist_arrays(z1, z2, w1, w2)
    moved = dist_arrays(p1, p2, q1, q2)
    gaps = moved - factor * base
    k = int(np.argmax(gaps))
    rows = []
    if collect_rows:
        for j in range(pairs):
            rows.append((z1[j].real, z1[j].imag, z2[j].real, z2[j].imag,
                         w1[j].real, w1[j].imag, w2[j].real, w2[j].imag,
                         float(base[j]), float(gaps[j])))
    near = float(np.mean(gaps > _NEAR_EQUALITY))
    return SweepResult(
        pairs=pairs, seed=seed, mode=mode,
        max_gap=float(gaps[k]),
        argmax_z=(z1[k].real, z1[k].imag, z2[k].real, z2[k].imag),
        argmax_w=(w1[k].real, w1[k].imag, w2[k].real, w2[k].imag),
        near_equality_fraction=near,
        automorphism_like=(mode == "q_class" and near >= 0.5),
        rows=rows)


def corollary_sweep(f: Expr, pairs: int, seed: int,
                    boundary_bias: float = 0.0) -> tuple[float, float]:
    """Max (sharp_gap, stated_gap) of the one-function contraction."""
    gen = rng.substream(seed, 0)
    z1, z2, w1, w2 = rng.draw_pair_arrays(gen, pairs, boundary_bias)
    fz = np.atleast_1d(funcspace.evaluate(f, z1, z2)).astype(complex)
    fw = np.atleast_1d(funcspace.evaluate(f, w1, w2)).astype(complex)
    denom = 1.0 - np.conjugate(fw) * fz
    if np.abs(denom).min() < 1e-15:
        raise mobius.DiskDomainError(
            "1 - conj(f(w)) f(z) vanished; |f| attains 1 inside the bidisk")
    move = np.abs((fz - fw) / denom)
    d = dist_arrays(z1, z2, w1, w2)
    return (float((move - d).max()), float((move * move - d).max()))


def write_csv(path, rows, header=("z1_re", "z1_im", "z2_re", "z2_im",
                                  "w1_re", "w1_im", "w2_re", "w2_im",
                                  "d", "gap")) -> None:
    """Dump sweep rows as CSV for external plotting."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
