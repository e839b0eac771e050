"""EM estimation of the self-interference and communication channels.

The unknown symbols of the far node are hidden data.  The E-step computes the
M x N posterior matrix T of symbol responsibilities; the M-step solves a
closed-form 4x4 real linear system for the parameter vector
``phi = [Re(h_aa), Im(h_aa), Re(h_ba), Im(h_ba)]``.  Iterating from
``phi = 0`` converges to the maximizer of the marginal likelihood when the
alphabet is asymmetric about the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import _kernels


class DegenerateUpdateError(RuntimeError):
    """Raised when the M-step system is numerically singular."""


class DivergenceError(RuntimeError):
    """Raised when an EM update produced non-finite parameters."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


@dataclass
class EmReport:
    estimate: np.ndarray
    iterations: int
    loglik_trace: List[float]
    converged: bool
    hessian_psd: bool


def split_channels(phi) -> tuple[complex, complex]:
    """(h_aa, h_ba) from the 4-real parameter vector."""
    phi = np.asarray(phi, dtype=np.float64)
    return complex(phi[0], phi[1]), complex(phi[2], phi[3])


def merge_channels(h_aa: complex, h_ba: complex) -> np.ndarray:
    return np.array([h_aa.real, h_aa.imag, h_ba.real, h_ba.imag])


def _as_points(alphabet) -> np.ndarray:
    return np.asarray(getattr(alphabet, "points", alphabet), dtype=np.complex128)


def _check_inputs(y, x_a, sigma2):
    y = np.asarray(y, dtype=np.complex128)
    x_a = np.asarray(x_a, dtype=np.complex128)
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    if y.shape != x_a.shape:
        raise ValueError("y and x_a must have equal length")
    return y, x_a


def log_likelihood(y, x_a, phi, alphabet, sigma2) -> float:
    """ln f(y; phi) = -N ln(M pi sigma^2) + sum_i LSE_k(-|r_{i,k}|^2 / sigma^2)."""
    y, x_a = _check_inputs(y, x_a, sigma2)
    points = _as_points(alphabet)
    h_aa, h_ba = split_channels(phi)
    lse = _kernels.loglik_sum(y, x_a, h_aa, h_ba, points, sigma2)
    return float(-y.size * np.log(points.size * np.pi * sigma2) + lse)


def posterior_matrix(y, x_a, phi, alphabet, sigma2) -> np.ndarray:
    """E-step responsibilities: per-column softmax over the alphabet hypotheses."""
    y, x_a = _check_inputs(y, x_a, sigma2)
    points = _as_points(alphabet)
    h_aa, h_ba = split_channels(phi)
    return _kernels.posterior(y, x_a, h_aa, h_ba, points, sigma2)


def _solve_mstep(sums) -> np.ndarray:
    s1, s2, s3, s4, v1, v2, v3, v4 = sums
    det = s1 * s4 - s2 * s2 - s3 * s3
    if s1 <= 0.0 or abs(det) <= 1e-12 * s1 * s1:
        raise DegenerateUpdateError(
            f"singular M-step system (s1={s1}, det condition={det})")
    return np.array([
        -s2 * v3 - s3 * v4 + s4 * v1,
        -s2 * v4 + s3 * v3 + s4 * v2,
        s1 * v3 - s2 * v1 + s3 * v2,
        s1 * v4 - s2 * v2 - s3 * v1,
    ]) / det


def mstep_matrix(sums) -> tuple[np.ndarray, np.ndarray]:
    """The (S, v) pair whose solution S^-1 v is the M-step update."""
    s1, s2, s3, s4, v1, v2, v3, v4 = sums
    s = np.array([
        [s1, 0.0, s2, s3],
        [0.0, s1, -s3, s2],
        [s2, -s3, s4, 0.0],
        [s3, s2, 0.0, s4],
    ])
    return s, np.array([v1, v2, v3, v4])


def m_step(t, y, x_a, alphabet) -> np.ndarray:
    """Closed-form minimizer of the posterior-weighted squared residual."""
    y = np.asarray(y, dtype=np.complex128)
    x_a = np.asarray(x_a, dtype=np.complex128)
    points = _as_points(alphabet)
    sums = _kernels.mstep_sums(np.asarray(t, dtype=np.float64), y, x_a, points)
    return _solve_mstep(sums)


def em_estimate(y, x_a, alphabet, sigma2, max_iter: int = 200,
                tol: float = 1e-8) -> EmReport:
    """Run EM from phi = [0,0,0,0] until the parameter change drops below tol.

    The log-likelihood after every M-step is recorded; ``hessian_psd`` reports
    whether the final M-step system satisfied Sylvester's criterion, i.e. the
    critical point was a true minimum of the weighted residual.
    """
    y, x_a = _check_inputs(y, x_a, sigma2)
    if y.size < 4:
        raise ValueError("need at least 4 observations for 4 real parameters")
    points = _as_points(alphabet)

    phi = np.zeros(4)
    trace: List[float] = []
    converged = False
    sums = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        h_aa, h_ba = split_channels(phi)
        t = _kernels.posterior(y, x_a, h_aa, h_ba, points, sigma2)
        sums = _kernels.mstep_sums(t, y, x_a, points)
        new_phi = _solve_mstep(sums)
        if not np.all(np.isfinite(new_phi)):
            raise DivergenceError("non-finite EM update", trace=trace)
        trace.append(log_likelihood(y, x_a, new_phi, points, sigma2))
        delta = float(np.max(np.abs(new_phi - phi)))
        phi = new_phi
        if delta < tol:
            converged = True
            break
    s1, s2, s3, s4 = sums[:4]
    hessian_psd = s1 > 0.0 and s1 * s4 - s2 * s2 - s3 * s3 > 0.0
    return EmReport(estimate=phi, iterations=iterations, loglik_trace=trace,
                    converged=converged, hessian_psd=hessian_psd)
