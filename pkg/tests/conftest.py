import cmath

import numpy as np
import pytest

from bidisk import rng


@pytest.fixture
def stream():
    """A fresh deterministic generator per test."""
    return rng.substream(0xBD15C0DE, 0)


def random_disk_complex(gen, radius=0.95):
    """One complex point, area-uniform in the disk of the given radius."""
    r = radius * (gen.next_double() ** 0.5)
    a = 2.0 * cmath.pi * gen.next_double()
    return r * cmath.exp(1j * a)


def disk_array(gen, count, radius=0.95):
    return np.array([random_disk_complex(gen, radius) for _ in range(count)])
