"""Agreement between the active kernel path and the pure-numpy reference."""

import numpy as np
import pytest

from fdshift import _kernels
from fdshift.constellation import make_qam, shift


def _random_problem(seed, n=64, sigma2=1.0):
    rng = np.random.default_rng(seed)
    points = shift(make_qam(16, 1.0), 0.2).points
    x_a = points[rng.integers(0, 16, n)]
    x_b = points[rng.integers(0, 16, n)]
    h_aa = complex(*rng.standard_normal(2)) * 10
    h_ba = complex(*rng.standard_normal(2))
    y = h_aa * x_a + h_ba * x_b + np.sqrt(sigma2 / 2) * (
        rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return y, x_a, h_aa, h_ba, points


@pytest.mark.parametrize("seed", range(5))
def test_posterior_paths_agree(seed):
    y, x_a, h_aa, h_ba, points = _random_problem(seed)
    t_active = _kernels.posterior(y, x_a, h_aa, h_ba, points, 1.0)
    t_np = _kernels.posterior_np(y, x_a, h_aa, h_ba, points, 1.0)
    assert np.allclose(t_active, t_np, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_loglik_paths_agree(seed):
    y, x_a, h_aa, h_ba, points = _random_problem(seed)
    a = _kernels.loglik_sum(y, x_a, h_aa, h_ba, points, 1.0)
    b = _kernels.loglik_sum_np(y, x_a, h_aa, h_ba, points, 1.0)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_mstep_paths_agree(seed):
    y, x_a, h_aa, h_ba, points = _random_problem(seed)
    t = _kernels.posterior_np(y, x_a, h_aa, h_ba, points, 1.0)
    a = _kernels.mstep_sums(t, y, x_a, points)
    b = _kernels.mstep_sums_np(t, y, x_a, points)
    for u, v in zip(a, b):
        assert u == pytest.approx(v, rel=1e-10, abs=1e-10)


def test_posterior_is_distribution():
    y, x_a, h_aa, h_ba, points = _random_problem(42)
    t = _kernels.posterior(y, x_a, h_aa, h_ba, points, 1.0)
    assert np.all(t >= 0)
    assert np.allclose(t.sum(axis=0), 1.0, atol=1e-12)


def test_tiny_sigma2_stays_finite():
    # softmax must be max-subtracted or this underflows to nan
    y, x_a, h_aa, h_ba, points = _random_problem(3, sigma2=1e-12)
    t = _kernels.posterior(y, x_a, h_aa, h_ba, points, 1e-12)
    ll = _kernels.loglik_sum(y, x_a, h_aa, h_ba, points, 1e-12)
    assert np.all(np.isfinite(t))
    assert np.isfinite(ll)
    assert np.allclose(t.sum(axis=0), 1.0, atol=1e-9)
