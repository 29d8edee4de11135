"""Unit-disk and bidisk primitives.

Blaschke factors, the one-variable pseudo-hyperbolic distance, and the
automorphism group of the bidisk in a fixed normal form (optional coordinate
swap, then a Blaschke factor per coordinate, then a rotation per coordinate).

All values are immutable and every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Points with modulus >= 1 - DISK_MARGIN are rejected as disk elements, so
#: strict-inequality invariants stay testable.  Boundary (torus) values are a
#: separate role and only enter sup-norm sampling.
DISK_MARGIN = 1e-15

_DENOM_GUARD = 1e-15


class DiskDomainError(ValueError):
    """A value violated an open-disk or denominator precondition."""


def check_disk(z: complex) -> complex:
    """Validate that ``z`` lies in the open unit disk, with the documented margin."""
    z = complex(z)
    if abs(z) >= 1.0 - DISK_MARGIN:
        raise DiskDomainError(f"point {z} is not in the open unit disk (|z|={abs(z)!r})")
    return z


def blaschke(w: complex, z):
    """Evaluate the Blaschke factor (z - w) / (1 - conj(w) z).

    ``w`` must lie in the open disk; ``z`` may be a scalar or array and may
    sit on the closed disk (torus sampling is permitted).  The modulus of the
    result is < 1 inside the disk and exactly 1 on the boundary.
    """
    w = check_disk(w)
    denom = 1.0 - np.conjugate(w) * z if isinstance(z, np.ndarray) else 1.0 - w.conjugate() * z
    if isinstance(denom, np.ndarray):
        if np.abs(denom).min() < _DENOM_GUARD:
            raise DiskDomainError("Blaschke denominator below machine guard")
        return (z - w) / denom
    if abs(denom) < _DENOM_GUARD:
        raise DiskDomainError("Blaschke denominator below machine guard")
    return (z - w) / denom


def dist1(z: complex, w: complex) -> float:
    """One-variable pseudo-hyperbolic distance |b_w(z)| for z, w in the disk."""
    check_disk(z)
    return abs(blaschke(w, z))


@dataclass(frozen=True)
class BidiskPoint:
    """A point of the open bidisk; both coordinates strictly inside the disk."""

    z1: complex
    z2: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", check_disk(self.z1))
        object.__setattr__(self, "z2", check_disk(self.z2))

    def as_pair(self) -> tuple[complex, complex]:
        return (self.z1, self.z2)

    @classmethod
    def of(cls, z1, z2) -> "BidiskPoint":
        return cls(complex(z1), complex(z2))


def as_pair(p) -> tuple[complex, complex]:
    """Accept a BidiskPoint or a raw (z1, z2) pair; return validated coordinates."""
    if isinstance(p, BidiskPoint):
        return p.as_pair()
    z1, z2 = p
    return (check_disk(z1), check_disk(z2))


@dataclass(frozen=True)
class BidiskAutomorphism:
    """Bidisk automorphism in normal form: swap?, then Blaschke, then rotation.

    Applied to z, the map is (e^{i theta_1} b_{w1}(x1), e^{i theta_2} b_{w2}(x2))
    where (x1, x2) is z with coordinates exchanged when ``swap`` is set.  The
    normal form makes representations unique, so equality tests are structural.
    """

    theta1: float = 0.0
    theta2: float = 0.0
    w1: complex = 0j
    w2: complex = 0j
    swap: bool = False

    def __post_init__(self):
        object.__setattr__(self, "w1", check_disk(self.w1))
        object.__setattr__(self, "w2", check_disk(self.w2))

    def apply(self, p) -> BidiskPoint:
        z1, z2 = as_pair(p)
        x1, x2 = (z2, z1) if self.swap else (z1, z2)
        y1 = complex(math.cos(self.theta1), math.sin(self.theta1)) * blaschke(self.w1, x1)
        y2 = complex(math.cos(self.theta2), math.sin(self.theta2)) * blaschke(self.w2, x2)
        return BidiskPoint(y1, y2)

    def apply_arrays(self, z1, z2):
        """Vectorized apply on coordinate arrays (used by metric sweeps)."""
        x1, x2 = (z2, z1) if self.swap else (z1, z2)
        y1 = complex(math.cos(self.theta1), math.sin(self.theta1)) * blaschke(self.w1, x1)
        y2 = complex(math.cos(self.theta2), math.sin(self.theta2)) * blaschke(self.w2, x2)
        return y1, y2

    def __call__(self, p) -> BidiskPoint:
        return self.apply(p)

    def inverse(self) -> "BidiskAutomorphism":
        """The group inverse, again in normal form.

        Uses b_{-w}(e^{-i t} y) = e^{-i t} b_{w'}(y) with w' = -e^{i t} w; with
        a swap the coordinate roles exchange.
        """
        rot1 = complex(math.cos(self.theta1), math.sin(self.theta1))
        rot2 = complex(math.cos(self.theta2), math.sin(self.theta2))
        if not self.swap:
            return BidiskAutomorphism(
                theta1=-self.theta1, theta2=-self.theta2,
                w1=-rot1 * self.w1, w2=-rot2 * self.w2, swap=False)
        return BidiskAutomorphism(
            theta1=-self.theta2, theta2=-self.theta1,
            w1=-rot2 * self.w2, w2=-rot1 * self.w1, swap=True)


IDENTITY_AUTOMORPHISM = BidiskAutomorphism()
SWAP_AUTOMORPHISM = BidiskAutomorphism(swap=True)


def random_automorphism(gen) -> BidiskAutomorphism:
    """Draw a random automorphism from an rng stream (centers with |w| <= 0.8)."""
    theta1 = 2.0 * math.pi * gen.next_double()
    theta2 = 2.0 * math.pi * gen.next_double()
    r1 = 0.8 * math.sqrt(gen.next_double())
    a1 = 2.0 * math.pi * gen.next_double()
    r2 = 0.8 * math.sqrt(gen.next_double())
    a2 = 2.0 * math.pi * gen.next_double()
    swap = gen.next_double() < 0.5
    w1 = complex(r1 * math.cos(a1), r1 * math.sin(a1))
    w2 = complex(r2 * math.cos(a2), r2 * math.sin(a2))
    return BidiskAutomorphism(theta1, theta2, w1, w2, swap)
