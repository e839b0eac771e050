"""Data-aided least-squares pilot estimator and the perfect-CSI reference."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelPair
from .estimator import merge_channels


class EstimationError(RuntimeError):
    """Raised when the pilot design is rank deficient."""


@dataclass
class PilotLayout:
    n_pilots: int
    positions: np.ndarray
    pilot_energy_factor: float = 1.0

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.int64)
        if self.n_pilots != self.positions.size or self.n_pilots < 2:
            raise ValueError("need at least 2 distinct pilot positions")
        if len(set(self.positions.tolist())) != self.n_pilots:
            raise ValueError("pilot positions must be distinct")


def head_layout(frame_len: int, n_pilots: int, beta: float) -> PilotLayout:
    """Pilots on the first n_pilots indices, carrying the frame's extra
    ``beta * N * E`` energy budget on top of their base symbol energy."""
    if not 2 <= n_pilots <= frame_len:
        raise ValueError("n_pilots must be in [2, frame_len]")
    factor = 1.0 + beta * frame_len / n_pilots
    return PilotLayout(n_pilots=n_pilots, positions=np.arange(n_pilots),
                       pilot_energy_factor=factor)


def ls_pilot_estimate(y, x_a, x_b_pilots, layout: PilotLayout) -> np.ndarray:
    """Joint LS fit of (h_aa, h_ba) on the pilot positions via normal equations."""
    y = np.asarray(y, dtype=np.complex128)
    x_a = np.asarray(x_a, dtype=np.complex128)
    p = np.asarray(x_b_pilots, dtype=np.complex128)
    if p.size != layout.n_pilots:
        raise ValueError("pilot vector length mismatch")
    a = x_a[layout.positions]
    yp = y[layout.positions]
    g11 = np.sum(np.abs(a) ** 2)
    g22 = np.sum(np.abs(p) ** 2)
    g12 = np.sum(np.conj(a) * p)
    det = g11 * g22 - abs(g12) ** 2
    if det <= 1e-12 * max(g11, g22) ** 2:
        raise EstimationError("rank-deficient pilot design")
    r1 = np.sum(np.conj(a) * yp)
    r2 = np.sum(np.conj(p) * yp)
    h_aa = (g22 * r1 - g12 * r2) / det
    h_ba = (g11 * r2 - np.conj(g12) * r1) / det
    return merge_channels(complex(h_aa), complex(h_ba))


def ls_covariance(x_a, x_b_pilots, layout: PilotLayout, sigma2: float) -> np.ndarray:
    """Analytic 2x2 complex covariance sigma^2 (A^H A)^-1 of the LS estimate."""
    a = np.asarray(x_a, dtype=np.complex128)[layout.positions]
    p = np.asarray(x_b_pilots, dtype=np.complex128)
    g = np.array([[np.sum(np.abs(a) ** 2), np.sum(np.conj(a) * p)],
                  [np.sum(np.conj(p) * a), np.sum(np.abs(p) ** 2)]])
    return sigma2 * np.linalg.inv(g)


def perfect_csi(ch: ChannelPair) -> np.ndarray:
    """True parameters, the genie-aided reference."""
    return merge_channels(complex(ch.h_aa), complex(ch.h_ba))
