"""Kraus-operator channels with CPTP validation, plus pluggable memory kernels.

Each constructor returns a :class:`KrausChannel` whose operators satisfy the
completeness relation sum_i K_i^dag K_i = I within 1e-10. The built-in
channels:

    rtn    random telegraph noise dephasing, kernel value Lambda
    nmd    non-Markovian dephasing, kernel value Omega
    pd     phase damping, rate gamma
    ad     amplitude damping, rate gamma
    gad    generalized amplitude damping, parameters alpha and xi
    unruh  acceleration-induced thermal channel, parameter r
    gdc    generalized depolarizing (Pauli) channel, weights p0..p3

Memory kernels are injected as values: ``rtn``/``nmd`` take the scalar kernel
value, while :func:`rtn_kernel` / :func:`nmd_kernel` produce those values from
physical parameters. The kernel functional forms are documented defaults taken
from the standard open-systems literature, not channel-intrinsic content, and
can be swapped for any other map into [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .linalg import DensityMatrix, IDENTITY2, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, as_matrix

COMPLETENESS_TOL = 1e-10
KERNEL_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """A channel rho -> sum_i K_i rho K_i^dag with validated completeness.

    ``params`` records the constructor arguments under their stable names
    (gamma, alpha, xi, r, p0..p3, lambda, omega) for reporting and for
    closed-form lookups.
    """

    ops: tuple
    label: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.ops) == 0:
            raise ValueError("channel needs at least one Kraus operator")
        mats = tuple(as_matrix(k).copy() for k in self.ops)
        dim = mats[0].shape[0]
        if any(m.shape != (dim, dim) for m in mats):
            raise ValueError("all Kraus operators must share one dimension")
        total = sum(m.conj().T @ m for m in mats)
        dev = float(np.max(np.abs(total - np.eye(dim))))
        if dev > COMPLETENESS_TOL:
            raise ValueError(
                f"completeness violated: max |sum K^dag K - I| = {dev:.3e}"
            )
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "ops", mats)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    """Apply the channel: sum_i K_i rho K_i^dag."""
    state = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if state.dim != ch.dim:
        raise ValueError(f"dimension mismatch: channel {ch.dim}, state {state.dim}")
    out = sum(k @ state.mat @ k.conj().T for k in ch.ops)
    return DensityMatrix(out)


def bloch_map(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Affine Bloch representation r -> A r + c of a qubit channel.

    A[i, j] = Tr(sigma_i Phi(sigma_j))/2 and c[i] = Tr(sigma_i Phi(I))/2.
    Exact for any CPTP qubit map; used as the fast evaluation route.
    """
    if ch.dim != 2:
        raise ValueError("Bloch representation is qubit-only")

    def phi(m):
        return sum(k @ m @ k.conj().T for k in ch.ops)

    a = np.empty((3, 3), dtype=float)
    for j, pj in enumerate(PAULIS):
        out = phi(pj)
        for i, pi in enumerate(PAULIS):
            a[i, j] = 0.5 * np.trace(pi @ out).real
    img = phi(np.asarray(IDENTITY2))
    c = np.array([0.5 * np.trace(p @ img).real for p in PAULIS])
    return a, c


def _check_kernel_value(value: float, name: str) -> float:
    v = float(value)
    if abs(v) > 1.0 + KERNEL_TOL:
        raise ValueError(f"invalid kernel value: |{name}| = {abs(v):.6f} exceeds 1")
    return min(1.0, max(-1.0, v))


def _dephasing_pair(value: float):
    k_plus = np.sqrt((1.0 + value) / 2.0)
    k_minus = np.sqrt((1.0 - value) / 2.0)
    return (k_plus * np.asarray(IDENTITY2), k_minus * np.asarray(SIGMA_Z))


def rtn(lam: float) -> KrausChannel:
    """Random telegraph noise dephasing for kernel value Lambda in [-1, 1].

    K0 = k+ I and K1 = k- sigma_z with k_pm = sqrt((1 +- Lambda)/2); the map
    scales off-diagonal entries by Lambda and leaves populations untouched.
    """
    value = _check_kernel_value(lam, "lambda")
    return KrausChannel(_dephasing_pair(value), "rtn", {"lambda": value})


def nmd(omega: float) -> KrausChannel:
    """Non-Markovian dephasing: same operator structure as rtn, value Omega."""
    value = _check_kernel_value(omega, "omega")
    return KrausChannel(_dephasing_pair(value), "nmd", {"omega": value})


def pd(gamma: float) -> KrausChannel:
    """Phase damping with gamma in [0, 1].

    Kraus pair diag(1, sqrt(1-gamma)) and diag(0, sqrt(gamma)): populations
    preserved, coherences scaled by sqrt(1-gamma). The second operator's
    (0, 0) entry must be 0, not 1, for completeness to hold.
    """
    g = float(gamma)
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {g}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - g)]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [0.0, np.sqrt(g)]], dtype=complex)
    return KrausChannel((k0, k1), "pd", {"gamma": g})


def ad(gamma: float) -> KrausChannel:
    """Amplitude damping with gamma in [0, 1] (decay |1> -> |0>)."""
    g = float(gamma)
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {g}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - g)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(g)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1), "ad", {"gamma": g})


def gad(alpha: float, xi: float) -> KrausChannel:
    """Generalized amplitude damping with alpha, xi in [0, 1].

    Four operators sqrt(alpha) diag(1, sqrt(xi)), sqrt(alpha P) |0><1|,
    sqrt(beta) diag(sqrt(xi), 1) and sqrt(beta P) |1><0| with beta = 1 - alpha
    and P = 1 - xi, the unique weights for which completeness holds for every
    alpha. alpha = 1 reduces to amplitude damping with gamma = 1 - xi; xi = 1
    is the identity for any alpha.
    """
    a = float(alpha)
    x = float(xi)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {a}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"xi must be in [0, 1], got {x}")
    beta = 1.0 - a
    p = 1.0 - x
    g0 = np.sqrt(a) * np.array([[1.0, 0.0], [0.0, np.sqrt(x)]], dtype=complex)
    g1 = np.sqrt(a) * np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    g3 = np.sqrt(beta) * np.array([[np.sqrt(x), 0.0], [0.0, 1.0]], dtype=complex)
    g4 = np.sqrt(beta) * np.array([[0.0, 0.0], [np.sqrt(p), 0.0]], dtype=complex)
    return KrausChannel((g0, g1, g3, g4), "gad", {"alpha": a, "xi": x})


def unruh(r: float) -> KrausChannel:
    """Unruh channel for r in [0, pi/4].

    Kraus pair diag(cos r, 1) and sin r |1><0|; complete because
    cos^2 r + sin^2 r = 1 on the |0> component. The parameter maps to an
    acceleration a through cos r = (1 + e^{-2 pi omega c / a})^{-1/2}.
    """
    rv = float(r)
    if not 0.0 <= rv <= np.pi / 4.0 + 1e-15:
        raise ValueError(f"r must be in [0, pi/4], got {rv}")
    u0 = np.array([[np.cos(rv), 0.0], [0.0, 1.0]], dtype=complex)
    u1 = np.array([[0.0, 0.0], [np.sin(rv), 0.0]], dtype=complex)
    return KrausChannel((u0, u1), "unruh", {"r": rv})


def unruh_r_from_acceleration(exponent: float) -> float:
    """Unruh parameter r with cos r = (1 + e^{-x})^{-1/2}, x = 2 pi omega c / a.

    x -> infinity (small acceleration) gives r -> 0 and quantumness cos^2 r -> 1.
    """
    x = float(exponent)
    if x < 0.0:
        raise ValueError("exponent 2 pi omega c / a must be nonnegative")
    return float(np.arccos(1.0 / np.sqrt(1.0 + np.exp(-x))))


def gdc(p0: float, p1: float, p2: float, p3: float) -> KrausChannel:
    """Generalized depolarizing channel: operators sqrt(p_i) sigma_i.

    Weights must be nonnegative and sum to 1 within 1e-12.
    """
    weights = [float(p) for p in (p0, p1, p2, p3)]
    if any(w < 0.0 for w in weights):
        raise ValueError(f"negative weight in {weights}")
    total = sum(weights)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    mats = (np.asarray(IDENTITY2), np.asarray(SIGMA_X), np.asarray(SIGMA_Y), np.asarray(SIGMA_Z))
    ops = tuple(np.sqrt(w) * m for w, m in zip(weights, mats))
    params = {f"p{i}": w for i, w in enumerate(weights)}
    return KrausChannel(ops, "gdc", params)


def rtn_kernel(t: float, gamma: float, b: float) -> float:
    """Damped random-telegraph kernel Lambda(t) for decay rate gamma and coupling b.

    Oscillatory regime (4 b^2 > gamma^2):
        Lambda = e^{-gamma t} (cos(w t) + (gamma/w) sin(w t)),  w = sqrt(4 b^2 - gamma^2)
    Damped regime (4 b^2 < gamma^2): the hyperbolic analogue with
    w_h = sqrt(gamma^2 - 4 b^2), evaluated in exponential form for stability.
    Critical case (4 b^2 = gamma^2): (1 + gamma t) e^{-gamma t}.

    The value stays in [-1, 1] for all t >= 0 and Lambda(0) = 1.
    """
    tv, g, bv = float(t), float(gamma), float(b)
    if tv < 0.0:
        raise ValueError(f"t must be nonnegative, got {tv}")
    if g <= 0.0 or bv <= 0.0:
        raise ValueError("gamma and b must be positive")
    disc = 4.0 * bv * bv - g * g
    if disc > 0.0:
        w = np.sqrt(disc)
        val = np.exp(-g * tv) * (np.cos(w * tv) + (g / w) * np.sin(w * tv))
    elif disc < 0.0:
        wh = np.sqrt(-disc)
        val = 0.5 * (
            (1.0 + g / wh) * np.exp((wh - g) * tv)
            + (1.0 - g / wh) * np.exp(-(wh + g) * tv)
        )
    else:
        val = (1.0 + g * tv) * np.exp(-g * tv)
    return float(min(1.0, max(-1.0, val)))


def nmd_kernel(p: float) -> float:
    """Default dephasing kernel Omega(p) = 1 - 2p for p in [0, 1]."""
    pv = float(p)
    if not 0.0 <= pv <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {pv}")
    return 1.0 - 2.0 * pv


@dataclass(frozen=True)
class MemoryKernel:
    """A scalar kernel s -> value in [-1, 1] driving rtn/nmd decoherence."""

    evaluate: Callable[[float], float]
    label: str


def rtn_memory_kernel(gamma: float, b: float) -> MemoryKernel:
    """Time kernel t -> rtn_kernel(t, gamma, b), label carries the parameters."""
    g, bv = float(gamma), float(b)
    if g <= 0.0 or bv <= 0.0:
        raise ValueError("gamma and b must be positive")
    return MemoryKernel(
        evaluate=lambda t: rtn_kernel(t, g, bv),
        label=f"rtn-damped(gamma={g:g},b={bv:g})",
    )


def nmd_memory_kernel() -> MemoryKernel:
    """Probability kernel p -> 1 - 2p."""
    return MemoryKernel(evaluate=nmd_kernel, label="nmd-linear")


def builtin_kernel(name: str, params: Mapping[str, float]) -> MemoryKernel:
    """Resolve a kernel by name; rtn-damped needs gamma and b in ``params``."""
    if name == "rtn-damped":
        try:
            return rtn_memory_kernel(params["gamma"], params["b"])
        except KeyError as exc:
            raise ValueError(f"kernel rtn-damped needs parameter {exc}") from None
    if name == "nmd-linear":
        return nmd_memory_kernel()
    raise ValueError(f"unknown kernel {name!r} (available: rtn-damped, nmd-linear)")
