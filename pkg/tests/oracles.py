"""Brute-force reference computations shared by the tests.

These deliberately avoid the package's closed forms: overlaps and norms are
evaluated as truncated number-basis sums.
"""

import math

import numpy as np


def fock_coefficients(alpha: complex, n_max: int = 60) -> np.ndarray:
    n = np.arange(n_max + 1)
    fact = np.array([math.factorial(k) for k in n], dtype=float)
    return np.exp(-abs(alpha) ** 2 / 2) * alpha ** n / np.sqrt(fact)


def fock_overlap(a: complex, b: complex, n_max: int = 60) -> complex:
    return complex(np.vdot(fock_coefficients(a, n_max), fock_coefficients(b, n_max)))


def fock_vector(coeffs, alphas, n_max: int = 60) -> np.ndarray:
    return sum(c * fock_coefficients(a, n_max) for c, a in zip(coeffs, alphas))


def two_component_terms(c1, c2, a1, a2, x, p):
    """Literal two-component Wigner decomposition for real c and real a1 > a2 > 0."""
    n2 = 1.0 / (c1 * c1 + c2 * c2 + 2 * c1 * c2 * math.exp(-0.5 * (a1 - a2) ** 2))
    alpha = x + 1j * p
    mid = (a1 + a2) / 2
    w1 = 2 / math.pi * n2 * c1 ** 2 * np.exp(-2 * np.abs(alpha - a1) ** 2)
    w2 = 2 / math.pi * n2 * c2 ** 2 * np.exp(-2 * np.abs(alpha - a2) ** 2)
    wint = (4 / math.pi * n2 * (c1 * c2) * np.exp(-2 * np.abs(alpha - mid) ** 2)
            * np.cos(2 * (a1 - a2) * np.imag(alpha - mid)))
    return w1, w2, wint
