"""Residual self-interference cancellation and minimum-distance detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .estimator import _as_points, split_channels


@dataclass
class DetectionResult:
    symbols_hat: np.ndarray
    bits_hat: np.ndarray
    symbol_errors: Optional[int] = None
    bit_errors: Optional[int] = None


def cancel_and_detect(y, x_a, phi, alphabet,
                      true_indices=None, true_bits=None) -> DetectionResult:
    """Subtract the estimated SI contribution and pick the nearest hypothesis.

    ``k_hat = argmin_k |y_i - h_aa_hat * x_a_i - h_ba_hat * p_k|^2`` per symbol,
    ties broken toward the lowest index.  Bits follow the alphabet's labeling.
    """
    y = np.asarray(y, dtype=np.complex128)
    x_a = np.asarray(x_a, dtype=np.complex128)
    h_aa, h_ba = split_channels(phi)
    points = _as_points(alphabet)
    resid = y - h_aa * x_a
    d = np.abs(resid[None, :] - h_ba * points[:, None]) ** 2
    k_hat = np.argmin(d, axis=0)
    bits_hat = alphabet.bits(k_hat)
    symbol_errors = None
    bit_errors = None
    if true_indices is not None:
        symbol_errors = int(np.sum(k_hat != np.asarray(true_indices)))
    if true_bits is not None:
        bit_errors = int(np.sum(bits_hat != np.asarray(true_bits)))
    return DetectionResult(symbols_hat=k_hat, bits_hat=bits_hat,
                           symbol_errors=symbol_errors, bit_errors=bit_errors)


def ber(tx_bits, rx_bits) -> float:
    """Fraction of differing bits between two equal-length streams."""
    tx = np.asarray(tx_bits)
    rx = np.asarray(rx_bits)
    if tx.shape != rx.shape or tx.size < 1:
        raise ValueError("bit streams must be non-empty and of equal length")
    return float(np.mean(tx != rx))
