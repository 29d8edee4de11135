"""Indefinite pseudo-hyperbolic geometry and Schur-class certification on the bidisk.

Submodules
----------
mobius      disk/bidisk primitives: Blaschke factors, automorphisms
funcspace   holomorphic expression trees, certified self-maps, triplets
grammar     the plain-text function grammar used by the CLI
kernel      Szegő kernel, the indefinite kernel, Pick matrices
psd         Hermitian eigenvalue numerics (cyclic Jacobi, two backends)
classes     membership certificates and seeded violation search
geometry    the indefinite distance, metric axioms, contraction sweeps
hardy       truncated Toeplitz/defect/core operator algebra
cli         the ``bidisk`` command
"""

__version__ = "0.1.0"

from .funcspace import (SelfMap, Triplet, certify, dilate, product_triplet,
                        scaled_triplet)
from .geometry import dist
from .mobius import BidiskAutomorphism, BidiskPoint

__all__ = [
    "__version__",
    "BidiskAutomorphism",
    "BidiskPoint",
    "SelfMap",
    "Triplet",
    "certify",
    "dilate",
    "dist",
    "product_triplet",
    "scaled_triplet",
]
