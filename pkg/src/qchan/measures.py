"""Incompatibility of state pairs and channel quantumness closed forms.

The central quantity is the squared Hilbert-Schmidt norm of the commutator,

    M(rho, sigma) = 2 Tr(C^dag C),   C = rho sigma - sigma rho,

which for qubits equals |a x b|^2 of the Bloch vectors and has the exact
trace rewriting 4 (Tr[rho^2 sigma^2] - Tr[(rho sigma)^2]). The two trace
factors are the interferometric visibilities: M = 4 (v1 - v2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Mapping, NamedTuple

import numpy as np

from .linalg import BLOCH_NORM_TOL, as_matrix, commutator, hs_norm_sq

IMAG_RESIDUE_TOL = 1e-12
DIAGONAL_TOL = 1e-12


def _real_trace(value: complex, what: str) -> float:
    """Strip the imaginary residue of a trace that must be real."""
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise RuntimeError(
            f"internal consistency: {what} has imaginary part {value.imag:.3e}"
        )
    return float(value.real)


def _pair(rho, sigma):
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def incompatibility(rho, sigma) -> float:
    """M(rho, sigma) = 2 Tr(C^dag C) with C = [rho, sigma].

    Symmetric, zero exactly when the states commute, and bounded by 1 for
    qubit pairs.
    """
    a, b = _pair(rho, sigma)
    return 2.0 * hs_norm_sq(commutator(a, b))


def incompatibility_bloch(a, b) -> float:
    """Qubit form |a x b|^2 on Bloch vectors (norms must not exceed 1)."""
    va = np.asarray(tuple(a), dtype=float)
    vb = np.asarray(tuple(b), dtype=float)
    for v in (va, vb):
        if v.shape != (3,):
            raise ValueError("Bloch vectors must have three components")
        if np.linalg.norm(v) > 1.0 + BLOCH_NORM_TOL:
            raise ValueError(f"invalid Bloch vector: norm {np.linalg.norm(v):.12f}")
    cross = np.cross(va, vb)
    return float(np.dot(cross, cross))


def incompatibility_trace_form(rho, sigma) -> float:
    """Trace form 4 (Tr[rho^2 sigma^2] - Tr[(rho sigma)^2]).

    Algebraically identical to :func:`incompatibility` for Hermitian inputs.
    """
    a, b = _pair(rho, sigma)
    ab = a @ b
    v1 = _real_trace(np.trace(a @ a @ b @ b), "Tr[rho^2 sigma^2]")
    v2 = _real_trace(np.trace(ab @ ab), "Tr[(rho sigma)^2]")
    return 4.0 * (v1 - v2)


class VisibilityPair(NamedTuple):
    """Interference visibilities v1 = Tr[rho^2 sigma^2], v2 = Tr[(rho sigma)^2]."""

    v1: float
    v2: float


def visibilities(rho, sigma) -> VisibilityPair:
    """The two trace quantities whose difference gives M = 4 (v1 - v2)."""
    a, b = _pair(rho, sigma)
    ab = a @ b
    v1 = _real_trace(np.trace(a @ a @ b @ b), "Tr[rho^2 sigma^2]")
    v2 = _real_trace(np.trace(ab @ ab), "Tr[(rho sigma)^2]")
    return VisibilityPair(v1, v2)


def coherence_l1(rho) -> float:
    """l1-norm coherence: sum of |off-diagonal entries|."""
    m = as_matrix(rho)
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))


class OuterInequalityCheck(NamedTuple):
    """Outcome of the incompatibility vs coherence bound; slack = rhs - lhs."""

    holds: bool
    slack: float


def check_outer_inequality(rho0, rhot, tol: float = 1e-10) -> OuterInequalityCheck:
    """Check M(rho0, rhot) <= 2 C_l1(rhot) for a diagonal initial state.

    The bound is stated for a mixed initial state diagonal in the reference
    basis; non-diagonal rho0 violates that hypothesis and is rejected. The
    quantum-Fisher-information middle term of the full chain is intentionally
    not computed.
    """
    m0 = as_matrix(rho0)
    off = float(np.max(np.abs(m0 - np.diag(np.diag(m0))))) if m0.size else 0.0
    if off > DIAGONAL_TOL:
        raise ValueError(
            f"hypothesis violation: rho0 must be diagonal, off-diagonal max {off:.3e}"
        )
    lhs = incompatibility(m0, rhot)
    rhs = 2.0 * coherence_l1(rhot)
    slack = rhs - lhs
    return OuterInequalityCheck(holds=slack >= -tol, slack=slack)


@dataclass(frozen=True)
class GadReferenceMu:
    """Both quoted closed-form candidates for the gad channel.

    The two expressions reference regimes xi > 1 and xi < 1 that conflict with
    xi being a damping parameter in [0, 1]; neither reproduces the numerically
    maximized value, so they are reference data only, never an oracle.
    """

    branch_xi_below_one: float
    branch_xi_above_one: float
    verified: ClassVar[bool] = False


TRUSTED_CLOSED_FORM_LABELS = frozenset({"rtn", "nmd", "pd", "ad", "unruh", "gdc"})

_REQUIRED_PARAMS = {
    "rtn": ("lambda",),
    "nmd": ("omega",),
    "pd": ("gamma",),
    "ad": ("gamma",),
    "unruh": ("r",),
    "gdc": ("p0", "p1", "p2", "p3"),
    "gad": ("xi",),
}


def closed_form_mu(label: str, params: Mapping[str, float]):
    """Analytic quantumness for a channel label.

    Values are exact maxima over the maximally noncommuting probe family:
    rtn -> Lambda^2, nmd -> Omega^2, pd -> 1 - gamma, ad -> 1 - gamma,
    unruh -> cos^2 r, gdc -> (p0+p1-p2-p3)^2 (p0-p1-p2+p3)^2.

    ``gad`` has no trusted closed form; both quoted branch expressions are
    returned together as a :class:`GadReferenceMu`, flagged unverified.
    """
    if label not in _REQUIRED_PARAMS:
        raise ValueError(f"unknown channel label {label!r}")
    missing = [k for k in _REQUIRED_PARAMS[label] if k not in params]
    if missing:
        raise ValueError(f"missing parameter(s) for {label}: {', '.join(missing)}")
    if label == "rtn":
        return float(params["lambda"]) ** 2
    if label == "nmd":
        return float(params["omega"]) ** 2
    if label in ("pd", "ad"):
        return 1.0 - float(params["gamma"])
    if label == "unruh":
        return float(np.cos(params["r"]) ** 2)
    if label == "gdc":
        p0, p1, p2, p3 = (float(params[f"p{i}"]) for i in range(4))
        return (p0 + p1 - p2 - p3) ** 2 * (p0 - p1 - p2 + p3) ** 2
    xi = float(params["xi"])
    return GadReferenceMu(
        branch_xi_below_one=xi * (2.0 * xi - 1.0) ** 2,
        branch_xi_above_one=xi * (xi - np.sqrt(2.0) * (xi - 1.0)) ** 2,
    )


def coherence_reference_mu(label: str, params: Mapping[str, float]):
    """Closed forms of the coherence-based channel measure, for comparison plots.

    Stored verbatim as reference curves; the underlying measure (basis
    minimization plus state average) is out of scope here. For ``ad`` the
    value is piecewise in gamma; for ``gad`` both time branches are returned
    as a dict together with the crossover time helper
    :func:`gad_reference_crossover_time`.
    """
    if label == "rtn":
        return float(params["lambda"]) ** 2
    if label == "nmd":
        return float(params["omega"]) ** 2
    if label == "pd":
        return 1.0 - float(params["gamma"])
    if label == "unruh":
        return float(np.cos(params["r"]) ** 2)
    if label == "gdc":
        p0, p1, p2, p3 = (float(params[f"p{i}"]) for i in range(4))
        return (p0 - p1) ** 2 + (p2 - p3) ** 2
    if label == "ad":
        g = float(params["gamma"])
        if g > 1.0 / 6.0:
            return 1.0 - g
        return (6.0 * g * g - 3.0 * g + 2.0) / 6.0
    if label == "gad":
        alpha = float(params["alpha"])
        xi = float(params["xi"])
        xi_tilde = 2.5 * (alpha - 1.0) ** 2 * (1.0 - xi) ** 2
        return {"late": xi, "early": 0.5 * xi + xi_tilde}
    raise ValueError(f"unknown channel label {label!r}")


def gad_reference_crossover_time(gamma: float, n: float) -> float:
    """Crossover time tau = -2/(gamma (2n+1)) ln[5/(6+4n+n^2)] for the gad reference curve."""
    g, nv = float(gamma), float(n)
    if g <= 0.0:
        raise ValueError("gamma must be positive")
    return -2.0 / (g * (2.0 * nv + 1.0)) * np.log(5.0 / (6.0 + 4.0 * nv + nv * nv))
