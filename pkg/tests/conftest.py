"""Shared generators for randomized state and amplitude inputs."""

import cmath
import math

import numpy as np

from entdyn.dynamics import XState


def random_x_state(rng) -> XState:
    """Valid X state: Dirichlet diagonal, coherences inside the positivity disks."""
    d1, d2, d3, d4 = rng.dirichlet(np.ones(4))
    m14 = rng.uniform(0.0, 1.0) * math.sqrt(d1 * d4)
    m23 = rng.uniform(0.0, 1.0) * math.sqrt(d2 * d3)
    p14 = rng.uniform(0.0, 2.0 * math.pi)
    p23 = rng.uniform(0.0, 2.0 * math.pi)
    return XState(
        d1=float(d1),
        d2=float(d2),
        d3=float(d3),
        d4=float(d4),
        ad14=m14 * cmath.exp(1j * p14),
        ad23=m23 * cmath.exp(1j * p23),
    )


def random_amplitude(rng) -> complex:
    """Amplitude drawn uniformly from the closed unit disk."""
    r = math.sqrt(rng.uniform(0.0, 1.0))
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * phase)
