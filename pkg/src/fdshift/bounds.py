"""Fisher information and the closed-form MSE lower bound.

The symbol-conditional information matrix is 4x4 with a real/imaginary block
structure; averaging it over both nodes' shifted alphabets gives a matrix
whose inverse yields the per-coordinate bound
``(sigma^2 / 2NE) * (1+beta) / (1+2beta)``, with E the pre-shift average
symbol energy.
"""

from __future__ import annotations

import numpy as np


def fim_conditional(x_a_bar, x_b_bar, sigma2: float) -> np.ndarray:
    """Information matrix conditioned on both transmitted symbol vectors."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    a = np.asarray(x_a_bar, dtype=np.complex128)
    b = np.asarray(x_b_bar, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("symbol vectors must have equal length")
    c = 2.0 / sigma2
    i11 = c * np.sum(np.abs(a) ** 2)
    i33 = c * np.sum(np.abs(b) ** 2)
    i13 = c * np.sum(a.real * b.real + a.imag * b.imag)
    i14 = c * np.sum(a.imag * b.real - a.real * b.imag)
    return np.array([
        [i11, 0.0, i13, i14],
        [0.0, i11, -i14, i13],
        [i13, -i14, i33, 0.0],
        [i14, i13, 0.0, i33],
    ])


def fim_avg(n: int, energy: float, beta: float, sigma2: float) -> np.ndarray:
    """Expectation of the conditional FIM over i.i.d. shifted-alphabet symbols."""
    _check(n, energy, beta, sigma2)
    c = 2.0 * n * energy / sigma2
    m = np.eye(4) * (1.0 + beta)
    m[0, 2] = m[2, 0] = m[1, 3] = m[3, 1] = beta
    return c * m


def mse_lower_bound(n: int, energy: float, beta: float, sigma2: float,
                    per_complex_channel: bool = False) -> float:
    """Closed-form lower bound on the estimator variance.

    Per real coordinate by default; ``per_complex_channel=True`` doubles it to
    match an ``E|h_hat - h|^2`` reporting convention.
    """
    _check(n, energy, beta, sigma2)
    bound = (sigma2 / (2.0 * n * energy)) * (1.0 + beta) / (1.0 + 2.0 * beta)
    return 2.0 * bound if per_complex_channel else bound


def _check(n, energy, beta, sigma2):
    if n <= 0 or energy <= 0 or sigma2 <= 0:
        raise ValueError("n, energy and sigma2 must be positive")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
