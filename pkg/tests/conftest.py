"""
Shared fixtures for the mirror-povm test suite
"""

import math

import numpy as np
import pytest

from src.measurement.ensemble import make_ensemble, trine_ensemble

# Closed-form success at θ = π/3, p = 0.2
EXAMPLE_SUCCESS = 0.42 / 0.55
EXAMPLE_A = 0.157459


@pytest.fixture
def trine():
    return trine_ensemble()


@pytest.fixture
def example():
    """Three-element regime point used throughout the examples"""
    return make_ensemble(math.pi / 3, 0.2)


@pytest.fixture
def orthogonal():
    """ψ1 ⟂ ψ2 with no weight on ψ3"""
    return make_ensemble(math.pi / 4, 0.5)


@pytest.fixture
def degenerate():
    return make_ensemble(0.0, 1.0 / 3.0)


def full_grid(n_theta: int, n_p: int):
    """(θ, p) pairs on the closed domain, θ-major"""
    for theta in np.linspace(0.0, math.pi / 2, n_theta):
        for p in np.linspace(0.0, 0.5, n_p):
            yield float(theta), float(p)


def near_corner(theta: float, p: float, radius: float = 1e-6) -> bool:
    return theta < radius and abs(p - 1.0 / 3.0) < radius
