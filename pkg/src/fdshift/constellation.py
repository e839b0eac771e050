"""Square-QAM alphabets, the real-axis asymmetry shift, and origin-symmetry detection.

A standard square QAM grid is symmetric about the origin, which makes blind
estimation of the two full-duplex channels ambiguous up to a unit-modulus
factor.  Translating every point by a real constant ``s = sqrt(beta * E)``
destroys that symmetry and restores identifiability.  This module builds the
alphabets, applies the shift, and searches for the symmetry witness
``(g, c)`` with ``x_k = c * x_{g(k)}`` that certifies the ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

SUPPORTED_ORDERS = (4, 16, 64)


class ConstellationOrderError(ValueError):
    """Raised for modulation orders that do not form a supported square QAM grid."""


def _gray(n: int) -> int:
    return n ^ (n >> 1)


class Constellation:
    """An ordered complex alphabet with per-point bit labels.

    ``labels[k]`` is the integer whose binary expansion (MSB first,
    ``bits_per_symbol`` wide) is transmitted when point ``k`` is sent.
    """

    def __init__(self, points, labels=None):
        self.points = np.asarray(points, dtype=np.complex128)
        self.order = int(self.points.size)
        if self.order < 2:
            raise ValueError("constellation needs at least 2 points")
        if len(np.unique(self.points)) != self.order:
            raise ValueError("constellation points must be distinct")
        m = self.order.bit_length() - 1
        if 2 ** m != self.order:
            raise ValueError("constellation order must be a power of 2")
        self.bits_per_symbol = m
        if labels is None:
            labels = np.arange(self.order)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.avg_energy = float(np.mean(np.abs(self.points) ** 2))

    def bits(self, indices) -> np.ndarray:
        """Bit stream (MSB first) for a sequence of point indices."""
        lab = self.labels[np.asarray(indices, dtype=np.int64)]
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return ((lab[:, None] >> shifts) & 1).astype(np.uint8).ravel()


class ShiftedConstellation:
    """A base alphabet translated by ``s = sqrt(beta * E)`` along the real axis."""

    def __init__(self, base: Constellation, beta: float):
        if not 0.0 < beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {beta}")
        scale = np.sqrt(base.avg_energy)
        if abs(np.mean(base.points)) > 1e-9 * scale + 1e-12:
            raise ValueError("shift requires a zero-mean base constellation")
        self.base = base
        self.beta = float(beta)
        self.shift_value = float(np.sqrt(beta * base.avg_energy))
        self.points = base.points + self.shift_value
        self.order = base.order
        self.bits_per_symbol = base.bits_per_symbol
        self.labels = base.labels
        self.avg_energy = float(np.mean(np.abs(self.points) ** 2))

    def bits(self, indices) -> np.ndarray:
        return self.base.bits(indices)


@dataclass(frozen=True)
class SymmetryWitness:
    """Certificate that ``points[k] == ratio * points[permutation[k]]`` for all k."""

    permutation: np.ndarray
    ratio: complex
    orbit_length: int


def make_qam(order: int, bit_energy: float) -> Constellation:
    """Gray-labelled square QAM scaled to average energy ``Eb * log2(order)``.

    The reflected-Gray code is applied independently per I/Q axis so adjacent
    grid points differ in exactly one bit.
    """
    if order not in SUPPORTED_ORDERS:
        raise ConstellationOrderError(
            f"order must be one of {SUPPORTED_ORDERS}, got {order}")
    if bit_energy <= 0:
        raise ValueError("bit_energy must be positive")
    side = int(round(np.sqrt(order)))
    half_bits = (order.bit_length() - 1) // 2
    amps = 2.0 * np.arange(side) - (side - 1)
    raw_energy = 2.0 * (side * side - 1) / 3.0
    target = bit_energy * (order.bit_length() - 1)
    scale = np.sqrt(target / raw_energy)
    points = np.empty(order, dtype=np.complex128)
    labels = np.empty(order, dtype=np.int64)
    k = 0
    for i in range(side):
        for q in range(side):
            points[k] = scale * (amps[i] + 1j * amps[q])
            labels[k] = (_gray(i) << half_bits) | _gray(q)
            k += 1
    return Constellation(points, labels)


def shift(base: Constellation, beta: float) -> ShiftedConstellation:
    """Apply the real-axis asymmetry shift to a zero-mean base alphabet."""
    return ShiftedConstellation(base, beta)


def check_symmetry(constellation, tol: float = 1e-9) -> Optional[SymmetryWitness]:
    """Search for a symmetry witness ``(g, c)`` with ``x_k = c * x_{g(k)}``.

    Candidate ratios are ``x_anchor / x_m`` for every point of equal modulus;
    each candidate is accepted only when multiplying the whole alphabet by it
    reproduces the alphabet as a multiset, which induces the permutation g.
    Returns None when no witness exists (the asymmetric, identifiable case).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    points = getattr(constellation, "points", constellation)
    points = np.asarray(points, dtype=np.complex128)
    mags = np.abs(points)
    anchor = int(np.argmax(mags))
    if mags[anchor] == 0.0:
        return None
    # negation is the canonical witness for grid constellations; try it first
    perm = _match_permutation(points, -1.0 + 0.0j, tol)
    if perm is not None:
        return SymmetryWitness(perm, -1.0 + 0.0j, 2)
    for m in range(points.size):
        if abs(mags[m] - mags[anchor]) > tol:
            continue
        c = points[anchor] / points[m]
        if abs(c - 1.0) <= tol:
            continue
        perm = _match_permutation(points, c, tol)
        if perm is not None:
            return SymmetryWitness(perm, complex(c), _orbit_length(c, points.size))
    return None


def _match_permutation(points: np.ndarray, c: complex, tol: float):
    """Permutation g with ``points[k] = c * points[g(k)]``, or None."""
    perm = np.empty(points.size, dtype=np.int64)
    for k in range(points.size):
        d = np.abs(points[k] - c * points)
        g = int(np.argmin(d))
        if d[g] > tol:
            return None
        perm[k] = g
    if len(set(perm.tolist())) != points.size:
        return None
    return perm


def _orbit_length(c: complex, order: int) -> int:
    z = 1.0 + 0.0j
    for m in range(1, 2 * order + 1):
        z *= c
        if abs(z - 1.0) < 1e-6:
            return m
    return 2 * order


def dump_points(points, path) -> None:
    """Write one "re,im" line per point, 17 significant digits."""
    pts = np.asarray(getattr(points, "points", points), dtype=np.complex128)
    with open(path, "w") as fh:
        for p in pts:
            fh.write(f"{p.real:.17g},{p.imag:.17g}\n")


def load_points(path) -> np.ndarray:
    """Read a "re,im"-per-line constellation file."""
    pts = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            re_s, im_s = line.split(",")
            pts.append(complex(float(re_s), float(im_s)))
    return np.asarray(pts, dtype=np.complex128)
