"""Certification engine for the kernel-positivity classes P, Q and S.

Semantics of a certificate: a PSD failure at any finite point set disproves
the operator inequality on the span of reproducing kernels, hence disproves
class membership.  No finite computation proves membership, so the positive
verdict is only ever "no_violation_found".  Violations replay: reassembling
the Pick matrix at the recorded witness points reproduces the recorded
minimum eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import funcspace, kernel, psd, rng
from ._defaults import BOUNDARY_BIAS, RANDOM_POINTS, TOL, TRIALS
from .funcspace import SelfMap, Triplet
from .grammar import triplet_text
from .mobius import BidiskPoint

VIOLATION = "violation_certified"
NO_VIOLATION = "no_violation_found"

_CLASS_KINDS = {"P": ("P",), "Q": ("Q",), "S": ("P", "Q")}


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    trials: int = TRIALS
    n_points: int = RANDOM_POINTS
    boundary_bias: float = BOUNDARY_BIAS
    tol: float = TOL

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 2 <= self.n_points <= 16:
            raise ValueError("n_points must lie in 2..16")
        if not 0.0 <= self.boundary_bias <= 1.0:
            raise ValueError("boundary_bias must lie in [0, 1]")


@dataclass(frozen=True)
class Certificate:
    """Outcome of a membership check or violation search.

    ``min_eigenvalue`` is the most negative eigenvalue encountered over all
    assembled matrices; ``witness_points`` are the points it occurred at.
    """

    triplet: str
    cls: str
    verdict: str
    min_eigenvalue: float
    witness_points: tuple[BidiskPoint, ...]
    matrix_size: int
    tol: float
    seed: int
    trials: int

    def to_json_dict(self) -> dict:
        return {
            "triplet": self.triplet,
            "class": self.cls,
            "verdict": self.verdict,
            "min_eigenvalue": self.min_eigenvalue,
            "witness_points": [[p.z1.real, p.z1.imag, p.z2.real, p.z2.imag]
                               for p in self.witness_points],
            "matrix_size": self.matrix_size,
            "tol": self.tol,
            "seed": self.seed,
            "trials": self.trials,
        }


def _check_points(t: Triplet, cls: str, points, tol: float):
    """Assemble the relevant kinds and return (worst verdict, min eigenvalue)."""
    worst: psd.PsdVerdict | None = None
    for kind in _CLASS_KINDS[cls]:
        verdict = psd.is_psd(kernel.pick_matrix(kind, t, points).entries, tol=tol)
        if worst is None or verdict.min_eigenvalue < worst.min_eigenvalue:
            worst = verdict
    assert worst is not None
    return worst


def membership_check(t: Triplet, cls: str, points, tol: float = TOL) -> Certificate:
    """Finite-sample membership evidence at the given points.

    S tests both kernel kinds and reports the minimum over both; P and Q test
    their own kind only.
    """
    if cls not in _CLASS_KINDS:
        raise ValueError(f"class must be one of P, Q, S; got {cls!r}")
    points = tuple(points)
    worst = _check_points(t, cls, points, tol)
    return Certificate(
        triplet=triplet_text(t),
        cls=cls,
        verdict=NO_VIOLATION if worst.is_psd else VIOLATION,
        min_eigenvalue=worst.min_eigenvalue,
        witness_points=points,
        matrix_size=len(points),
        tol=tol,
        seed=0,
        trials=0,
    )


def violation_search(t: Triplet, cls: str, config: SearchConfig) -> Certificate:
    """Seeded random hunt for a PSD failure; returns the most negative find.

    Each trial draws an independent point set from substream(seed, trial).
    The reported trial is the one with the lowest minimum eigenvalue, ties
    resolved toward the lowest trial index, so the outcome is independent of
    any parallel execution order.
    """
    if cls not in _CLASS_KINDS:
        raise ValueError(f"class must be one of P, Q, S; got {cls!r}")
    best: psd.PsdVerdict | None = None
    best_points: tuple[BidiskPoint, ...] = ()
    for trial in range(config.trials):
        gen = rng.substream(config.seed, trial)
        points = tuple(rng.draw_point_set(gen, config.n_points, config.boundary_bias))
        worst = _check_points(t, cls, points, config.tol)
        if best is None or worst.min_eigenvalue < best.min_eigenvalue:
            best = worst
            best_points = points
    assert best is not None
    return Certificate(
        triplet=triplet_text(t),
        cls=cls,
        verdict=NO_VIOLATION if best.is_psd else VIOLATION,
        min_eigenvalue=best.min_eigenvalue,
        witness_points=best_points,
        matrix_size=config.n_points,
        tol=config.tol,
        seed=config.seed,
        trials=config.trials,
    )


def compose_triplet(t: Triplet, psi: SelfMap) -> Triplet:
    """(phi1 o psi, phi2 o psi, phi3 o psi)."""
    return Triplet(
        funcspace.Compose(t.phi1, psi),
        funcspace.Compose(t.phi2, psi),
        funcspace.Compose(t.phi3, psi),
    )


@dataclass(frozen=True)
class ClosureReport:
    """Certificate for a composed triplet plus the hypothesis evidence.

    Composition preserves the one-sided classes when the product triplet of
    the inner map passes the Q test; ``precondition`` records the search
    evidence for that hypothesis.
    """

    certificate: Certificate
    precondition: Certificate


def composition_closure_check(t: Triplet, cls: str, psi: SelfMap,
                              config: SearchConfig) -> ClosureReport:
    """Empirical composition-closure test for cls in {P, Q}."""
    if cls not in ("P", "Q"):
        raise ValueError("composition closure is stated for the one-sided classes P and Q")
    pre = violation_search(funcspace.product_triplet(psi), "Q", config)
    cert = violation_search(compose_triplet(t, psi), cls, config)
    return ClosureReport(certificate=cert, precondition=pre)


class OriginConditionError(ValueError):
    """The triplet does not vanish at the origin where required."""


def schwarz_diag_check(t: Triplet, points, factor: float,
                       origin_tol: float = 1e-12) -> float:
    """Two-sided diagonal bound 0 <= D(z) <= factor * (|z1|^2 + |z2|^2 - |z1 z2|^2).

    D(z) is the diagonal of the indefinite kernel.  Requires
    phi1(0,0) = phi2(0,0) = 0; ``factor`` = 2 is a proved ceiling for product
    triplets of self-maps, 1 applies to triplets passing both kernel kinds.
    Returns the maximum violation over the points (<= 0 means the bound held
    with slack everywhere).
    """
    if factor <= 0.0:
        raise ValueError("factor must be positive")
    for name, f in (("phi1", t.phi1), ("phi2", t.phi2)):
        v = funcspace.eval_point(f, (0j, 0j))
        if abs(v) > origin_tol:
            raise OriginConditionError(
                f"{name}(0,0) = {v} is not 0 (tolerance {origin_tol:g})")
    pts = [p.as_pair() if isinstance(p, BidiskPoint) else tuple(p) for p in points]
    z1 = np.array([p[0] for p in pts])
    z2 = np.array([p[1] for p in pts])
    v1 = np.abs(np.atleast_1d(funcspace.evaluate(t.phi1, z1, z2))) ** 2
    v2 = np.abs(np.atleast_1d(funcspace.evaluate(t.phi2, z1, z2))) ** 2
    v3 = np.abs(np.atleast_1d(funcspace.evaluate(t.phi3, z1, z2))) ** 2
    diag = v1 + v2 - v3
    bound = np.abs(z1) ** 2 + np.abs(z2) ** 2 - np.abs(z1 * z2) ** 2
    return float(np.maximum(-diag, diag - factor * bound).max())
