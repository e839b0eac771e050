"""Hot numeric kernels for the EM loop: posterior, log-likelihood, M-step sums.

Each kernel exists twice: a numba ``@njit`` version used by default and a
vectorized pure-numpy fallback.  Set ``FDSHIFT_DISABLE_NUMBA=1`` before import
to force the numpy path (the benchmark in benchmarks/bench_em.py compares the
two directly).
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("FDSHIFT_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def _logits_np(y, x_a, h_aa, h_ba, points, sigma2):
    resid = (y - h_aa * x_a)[None, :] - h_ba * points[:, None]
    return -(resid.real ** 2 + resid.imag ** 2) / sigma2


def posterior_np(y, x_a, h_aa, h_ba, points, sigma2):
    z = _logits_np(y, x_a, h_aa, h_ba, points, sigma2)
    z -= z.max(axis=0, keepdims=True)
    t = np.exp(z)
    t /= t.sum(axis=0, keepdims=True)
    return t


def loglik_sum_np(y, x_a, h_aa, h_ba, points, sigma2):
    """sum_i log sum_k exp(-|r_{i,k}|^2 / sigma2), log-sum-exp stabilized."""
    z = _logits_np(y, x_a, h_aa, h_ba, points, sigma2)
    zmax = z.max(axis=0)
    return float(np.sum(zmax + np.log(np.sum(np.exp(z - zmax), axis=0))))


def mstep_sums_np(t, y, x_a, points):
    """The eight scalar accumulators (s1..s4, v1..v4) of the closed-form M-step."""
    w = (t * points.conj()[:, None]).sum(axis=0)
    s1 = float(np.sum(np.abs(x_a) ** 2))
    s2 = float(np.sum((x_a * w).real))
    s3 = float(np.sum((x_a * w).imag))
    s4 = float(np.dot(t.sum(axis=1), np.abs(points) ** 2))
    v1 = float(np.sum((np.conj(x_a) * y).real))
    v2 = float(np.sum((np.conj(x_a) * y).imag))
    v3 = float(np.sum((y * w).real))
    v4 = float(np.sum((y * w).imag))
    return s1, s2, s3, s4, v1, v2, v3, v4


if USE_NUMBA:

    @njit(cache=True)
    def posterior_nb(y, x_a, h_aa, h_ba, points, sigma2):
        m = points.shape[0]
        n = y.shape[0]
        t = np.empty((m, n))
        for i in range(n):
            base = y[i] - h_aa * x_a[i]
            zmax = -np.inf
            for k in range(m):
                r = base - h_ba * points[k]
                z = -(r.real * r.real + r.imag * r.imag) / sigma2
                t[k, i] = z
                if z > zmax:
                    zmax = z
            tot = 0.0
            for k in range(m):
                t[k, i] = np.exp(t[k, i] - zmax)
                tot += t[k, i]
            for k in range(m):
                t[k, i] /= tot
        return t

    @njit(cache=True)
    def loglik_sum_nb(y, x_a, h_aa, h_ba, points, sigma2):
        m = points.shape[0]
        n = y.shape[0]
        acc = 0.0
        for i in range(n):
            base = y[i] - h_aa * x_a[i]
            zmax = -np.inf
            for k in range(m):
                r = base - h_ba * points[k]
                z = -(r.real * r.real + r.imag * r.imag) / sigma2
                if z > zmax:
                    zmax = z
            tot = 0.0
            for k in range(m):
                r = base - h_ba * points[k]
                z = -(r.real * r.real + r.imag * r.imag) / sigma2
                tot += np.exp(z - zmax)
            acc += zmax + np.log(tot)
        return acc

    @njit(cache=True)
    def mstep_sums_nb(t, y, x_a, points):
        m = points.shape[0]
        n = y.shape[0]
        s1 = 0.0
        s2 = 0.0
        s3 = 0.0
        s4 = 0.0
        v1 = 0.0
        v2 = 0.0
        v3 = 0.0
        v4 = 0.0
        energies = np.empty(m)
        for k in range(m):
            energies[k] = points[k].real ** 2 + points[k].imag ** 2
        for i in range(n):
            w = 0.0 + 0.0j
            for k in range(m):
                w += t[k, i] * np.conj(points[k])
                s4 += t[k, i] * energies[k]
            xa = x_a[i]
            s1 += xa.real ** 2 + xa.imag ** 2
            aw = xa * w
            s2 += aw.real
            s3 += aw.imag
            ay = np.conj(xa) * y[i]
            v1 += ay.real
            v2 += ay.imag
            yw = y[i] * w
            v3 += yw.real
            v4 += yw.imag
        return s1, s2, s3, s4, v1, v2, v3, v4

    posterior = posterior_nb
    loglik_sum = loglik_sum_nb
    mstep_sums = mstep_sums_nb
else:
    posterior = posterior_np
    loglik_sum = loglik_sum_np
    mstep_sums = mstep_sums_np
