"""Parameterized pure-state pairs used to probe channels.

The probe family is built from two single-qubit pure states

    |a> = cos(x/2)|0> + e^{-i phi} sin(x/2)|1>
    |b> = cos(y/2)|0> + e^{-i xi}  sin(y/2)|1>

whose density matrices carry e^{+i phi} on the upper off-diagonal. The sign
convention matters: it fixes the Bloch vector to
(sin x cos phi, -sin x sin phi, cos x). Setting y = x + pi/2 and xi = phi
makes the pair maximally noncommuting (incompatibility 1) for every (x, phi).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import DensityMatrix

TWO_PI = 2.0 * np.pi


class StatePairParams(NamedTuple):
    """Angles (radians) for a probe pair; canonical ranges x, y in [0, pi], phi, xi in [0, 2 pi)."""

    x: float
    phi: float
    y: float
    xi: float


def _single_state(angle: float, phase: float) -> DensityMatrix:
    half = 0.5 * angle
    off = np.exp(1j * phase) * np.sin(angle) / 2.0
    mat = np.array(
        [[np.cos(half) ** 2, off], [np.conj(off), np.sin(half) ** 2]],
        dtype=complex,
    )
    return DensityMatrix(mat)


def state_pair(params: StatePairParams) -> tuple[DensityMatrix, DensityMatrix]:
    """Build the pure pair (rho_a, rho_b) for the given angles.

    Angles outside the canonical ranges are reduced modulo 2 pi rather than
    rejected, so optimizer refinement steps may wander freely.
    """
    x, phi, y, xi = (float(v) % TWO_PI for v in params)
    return _single_state(x, phi), _single_state(y, xi)


def max_noncommuting_pair(x: float, phi: float) -> tuple[DensityMatrix, DensityMatrix]:
    """Maximally noncommuting pair: y = x + pi/2, xi = phi.

    The incompatibility of the returned pair is 1 for every (x, phi).
    """
    return state_pair(StatePairParams(x, phi, x + np.pi / 2.0, phi))
