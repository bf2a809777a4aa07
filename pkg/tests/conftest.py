import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240915)


def fd_derivative_4th(f, s, h):
    """4th-order central first derivative of an array-valued f."""
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h)


def fd_second_derivative_4th(f, x, mu, h):
    """4th-order central second derivative along coordinate mu."""
    e = np.zeros(4)
    e[mu] = h
    return (-f(x + 2 * e) + 16 * f(x + e) - 30 * f(x) + 16 * f(x - e)
            - f(x - 2 * e)) / (12 * h * h)
