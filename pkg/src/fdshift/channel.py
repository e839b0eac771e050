"""Fading gains, noise, and received-frame synthesis for the full-duplex link.

The received frame is ``y = h_aa * x_a + h_ba * x_b + w`` with the residual
self-interference gain ``h_aa`` Rician distributed and the communication gain
``h_ba`` Rayleigh distributed.  All randomness flows through named, seeded
streams so that every estimator within a trial sees the same realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class FrameError(ValueError):
    """Raised when the frame inputs are inconsistent."""


@dataclass
class FadingConfig:
    var_h_ba: float = 1.0
    sir_db: float = -50.0
    rician_k: float = 1.0
    n0: float = 1.0

    @property
    def var_h_aa(self) -> float:
        """SI-channel variance implied by SIR = var_h_ba / var_h_aa."""
        return self.var_h_ba / 10.0 ** (self.sir_db / 10.0)


@dataclass
class ChannelPair:
    h_aa: complex
    h_ba: complex
    noise_var: float

    def __post_init__(self):
        if not (np.isfinite(self.h_aa) and np.isfinite(self.h_ba)):
            raise ValueError("channel gains must be finite")
        if self.noise_var < 0:
            raise ValueError("noise variance must be non-negative")


@dataclass
class Frame:
    x_a: np.ndarray
    x_b: np.ndarray
    y: np.ndarray
    bits_b: Optional[np.ndarray] = None


STREAM_NAMES = ("h_ba", "h_aa", "zeta", "symbols_a", "symbols_b", "noise")


def trial_streams(master_seed: int, point_index: int = 0, trial_index: int = 0):
    """Independent named generators for one Monte Carlo trial.

    Derived deterministically from (master_seed, point_index, trial_index) so
    reruns and parallel schedules reproduce bit-identical draws.
    """
    root = np.random.SeedSequence(entropy=(master_seed, point_index, trial_index))
    children = root.spawn(len(STREAM_NAMES))
    return {name: np.random.default_rng(seq)
            for name, seq in zip(STREAM_NAMES, children)}


def complex_normal(rng: np.random.Generator, var: float, size=None) -> np.ndarray:
    """Circularly-symmetric CN(0, var) draw (var/2 per real part)."""
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def sample_h_ba(cfg: FadingConfig, rng: np.random.Generator) -> complex:
    """Rayleigh communication gain, h_ba ~ CN(0, var_h_ba)."""
    return complex(complex_normal(rng, cfg.var_h_ba))


def sample_h_aa(cfg: FadingConfig, rng: np.random.Generator,
                zeta_rng: Optional[np.random.Generator] = None) -> complex:
    """Rician residual-SI gain: LOS term with uniform phase plus diffuse CN part.

    ``E[|h_aa|^2] = var_h_aa`` for every K factor.
    """
    k = cfg.rician_k
    if k < 0:
        raise ValueError("rician_k must be non-negative")
    sigma = np.sqrt(cfg.var_h_aa)
    zeta = (zeta_rng or rng).uniform(0.0, 2.0 * np.pi)
    los = np.sqrt(k / (k + 1.0)) * sigma * np.exp(1j * zeta)
    diffuse = complex_normal(rng, cfg.var_h_aa / (k + 1.0))
    return complex(los + diffuse)


def synthesize_frame(x_a, x_b, ch: ChannelPair,
                     rng: Optional[np.random.Generator] = None,
                     noise: Optional[np.ndarray] = None,
                     bits_b: Optional[np.ndarray] = None) -> Frame:
    """Received frame y = h_aa*x_a + h_ba*x_b + w with w ~ CN(0, noise_var I).

    A pre-drawn ``noise`` vector may be supplied so two transmit schemes can
    share one realization; otherwise it is drawn from ``rng``.
    """
    x_a = np.asarray(x_a, dtype=np.complex128)
    x_b = np.asarray(x_b, dtype=np.complex128)
    if x_a.shape != x_b.shape or x_a.ndim != 1 or x_a.size < 1:
        raise FrameError("x_a and x_b must be 1-D vectors of equal length")
    if noise is None:
        if ch.noise_var == 0.0:
            noise = np.zeros_like(x_a)
        else:
            if rng is None:
                raise FrameError("either rng or noise must be given")
            noise = complex_normal(rng, ch.noise_var, x_a.shape)
    else:
        noise = np.asarray(noise, dtype=np.complex128)
        if noise.shape != x_a.shape:
            raise FrameError("noise length mismatch")
    y = ch.h_aa * x_a + ch.h_ba * x_b + noise
    return Frame(x_a=x_a, x_b=x_b, y=y, bits_b=bits_b)


def sinr(cfg: FadingConfig, bit_energy: float, order: int) -> float:
    """Harmonic combination 1 / (1/SIR + 1/SNR) of the linear ratios."""
    if bit_energy <= 0 or order < 2:
        raise ValueError("bit_energy and order must be positive")
    sir = 10.0 ** (cfg.sir_db / 10.0)
    snr = cfg.var_h_ba * np.log2(order) * bit_energy / cfg.n0
    return 1.0 / (1.0 / sir + 1.0 / snr)
