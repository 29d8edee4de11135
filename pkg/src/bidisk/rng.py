"""Deterministic random streams and bidisk point sampling.

A splitmix64 hash derives one independent xoshiro256** stream per trial, so
search results are reproducible from (seed, trial index) alone, regardless of
execution order.  Point decoding order is fixed and documented in
``draw_point``; changing it would silently break report reproducibility.
"""

from __future__ import annotations

import math

from .mobius import BidiskPoint

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15

#: Moduli used for the boundary-biased fraction of sampled points.
BOUNDARY_MODULI = (0.9, 0.99, 0.999)

#: Area-uniform moduli are clamped here so every sample is a valid disk point.
MODULUS_CAP = 1.0 - 1e-12


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next_state, output)."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** seeded through splitmix64 (never an all-zero state)."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        s = seed & _MASK
        state = []
        for _ in range(4):
            s, z = splitmix64(s)
            state.append(z)
        if not any(state):
            state[0] = _GAMMA
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53


def substream(seed: int, index: int) -> Xoshiro256StarStar:
    """Independent stream for trial ``index`` of master ``seed``."""
    return Xoshiro256StarStar((seed ^ ((index + 1) * _GAMMA)) & _MASK)


def draw_point(gen: Xoshiro256StarStar, boundary_bias: float = 0.0) -> tuple[complex, complex]:
    """Draw one bidisk point as a raw coordinate pair.

    Decode order per point: u1, a1, u2, a2, bias; if biased, two further
    uniforms pick moduli from BOUNDARY_MODULI (angles a1, a2 are kept).
    Unbiased moduli are sqrt(u_j), i.e. area-uniform per coordinate.
    """
    u1 = gen.next_double()
    a1 = gen.next_double()
    u2 = gen.next_double()
    a2 = gen.next_double()
    b = gen.next_double()
    if b < boundary_bias:
        m1 = gen.next_double()
        m2 = gen.next_double()
        r1 = BOUNDARY_MODULI[min(int(m1 * 3.0), 2)]
        r2 = BOUNDARY_MODULI[min(int(m2 * 3.0), 2)]
    else:
        r1 = min(math.sqrt(u1), MODULUS_CAP)
        r2 = min(math.sqrt(u2), MODULUS_CAP)
    t1 = 2.0 * math.pi * a1
    t2 = 2.0 * math.pi * a2
    return (complex(r1 * math.cos(t1), r1 * math.sin(t1)),
            complex(r2 * math.cos(t2), r2 * math.sin(t2)))


def _near(p: tuple[complex, complex], q: tuple[complex, complex]) -> bool:
    return abs(p[0] - q[0]) <= 1e-9 and abs(p[1] - q[1]) <= 1e-9


def draw_point_set(gen: Xoshiro256StarStar, n: int,
                   boundary_bias: float = 0.0) -> list[BidiskPoint]:
    """Draw ``n`` pairwise-distinct points (colliding draws are redrawn in order)."""
    raw: list[tuple[complex, complex]] = []
    while len(raw) < n:
        cand = draw_point(gen, boundary_bias)
        if any(_near(cand, seen) for seen in raw):
            continue
        raw.append(cand)
    return [BidiskPoint(*p) for p in raw]


def draw_pair_arrays(gen: Xoshiro256StarStar, count: int, boundary_bias: float = 0.0):
    """Draw ``count`` (z, w) pairs as four coordinate lists (sweep input)."""
    z1 = []
    z2 = []
    w1 = []
    w2 = []
    for _ in range(count):
        a, b = draw_point(gen, boundary_bias)
        c, d = draw_point(gen, boundary_bias)
        z1.append(a)
        z2.append(b)
        w1.append(c)
        w2.append(d)
    import numpy as np

    return (np.array(z1), np.array(z2), np.array(w1), np.array(w2))
