"""Shared helpers and independent oracles for the test suite."""

import math

import numpy as np

from twospin import SpinParams, triplet_amplitudes

TWO_PI = 2.0 * math.pi


def wrap(angle):
    """Principal branch (-pi, pi]."""
    r = math.remainder(angle, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def circ_dist(a, b):
    return abs(wrap(a - b))


def random_symmetric(rng, omega1_low=0.0, omega1_high=0.0):
    omega0, gamma, J = rng.uniform(-3.0, 3.0, 3)
    omega1 = float(rng.uniform(omega1_low, omega1_high)) if omega1_high > 0 else 0.0
    return SpinParams.symmetric(float(omega0), float(gamma), float(J), omega1)


def random_general(rng, omega1_low=0.8, omega1_high=2.0):
    wa, wb, ga, gb, J = (float(v) for v in rng.uniform(-3.0, 3.0, 5))
    return SpinParams(wa, wb, ga, gb, J, float(rng.uniform(omega1_low, omega1_high)))


def random_state(rng):
    from twospin import TwoSpinState

    return TwoSpinState.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))


def sorted_spectrum_oracle(matrix):
    """Direct diagonalization oracle: ascending eigenvalues of a 4x4 hermitian."""
    return np.linalg.eigvalsh(matrix)


def berry_line_integral(omega0, gamma, J, n, intervals=20000):
    """Numeric loop integral i * closed-integral <xi|d xi/d theta> d theta.

    Amplitudes come from the closed-form eigenstate gauge at field angle theta;
    the derivative is a periodic central difference and the quadrature is the
    trapezoid rule on the closed uniform grid.
    """
    theta = np.linspace(0.0, TWO_PI, intervals, endpoint=False)
    x, y, z, w = triplet_amplitudes(omega0, gamma, J, n, theta)
    xi = np.vstack([x, y, z, w])
    dtheta = TWO_PI / intervals
    dxi = (np.roll(xi, -1, axis=1) - np.roll(xi, 1, axis=1)) / (2.0 * dtheta)
    integrand = (1j * np.sum(xi.conj() * dxi, axis=0)).real
    return float(dtheta * integrand.sum())
