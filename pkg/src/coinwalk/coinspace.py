"""
Two-level coin algebra for the decoherent walk.

Every operator here is a dense 2x2 complex128 array in the basis (|R>, |L>)
with |R> = (1, 0)^T and |L> = (0, 1)^T. All functions are pure.

Contents
--------
- CoinParams, ChannelParams: angle/probability parameter records
- make_coin, make_flip_coin, make_kraus: the unitary coin, the alternate
  coin C @ U0 and the two-element Kraus set of the flip channel
- apply_channel: rho -> sum_n A_n rho A_n^dagger
- pauli_decompose / pauli_expand / pauli_reconstruct: (I, X, Y, Z) coordinates
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidStateError

__all__ = [
    "ALGEBRA_TOL",
    "POSITIVITY_TOL",
    "PAULI",
    "CoinParams",
    "ChannelParams",
    "KrausPair",
    "PauliVec",
    "HADAMARD",
    "make_coin",
    "make_flip_coin",
    "flip_unitary",
    "make_kraus",
    "apply_channel",
    "pauli_decompose",
    "pauli_expand",
    "pauli_reconstruct",
    "coin_state",
    "validate_state",
    "eigvals_2x2",
    "is_unitary",
]

ALGEBRA_TOL = 1e-12
POSITIVITY_TOL = 1e-10

TWO_PI = 2.0 * math.pi

PAULI: NDArray[np.complex128] = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def _wrap(angle: float, period: float) -> float:
    a = math.fmod(float(angle), period)
    if a < 0.0:
        a += period
    # fmod of a tiny negative number can round up to exactly `period`
    return 0.0 if a >= period else a


@dataclass(frozen=True)
class CoinParams:
    """Angles (theta, phi1, phi2) of the general 2x2 coin.

    theta is reduced into [0, 2*pi). phi1 and phi2 are reduced modulo 2*pi,
    the true period of the coin matrix; reducing them modulo pi would flip
    signs of matrix entries and give a different coin.
    """

    theta: float = math.pi / 4
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", _wrap(self.theta, TWO_PI))
        object.__setattr__(self, "phi1", _wrap(self.phi1, TWO_PI))
        object.__setattr__(self, "phi2", _wrap(self.phi2, TWO_PI))


@dataclass(frozen=True)
class ChannelParams:
    """Decoherence probability ``p`` in [0, 1] and flip phase ``phi3``.

    ``phi3`` is reduced into [0, pi): shifting it by pi only negates A0,
    which leaves the channel unchanged.
    """

    p: float = 0.5
    phi3: float = 0.0

    def __post_init__(self) -> None:
        p = float(self.p)
        if not (0.0 <= p <= 1.0) or math.isnan(p):
            raise ValueError(f"decoherence probability must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "phi3", _wrap(self.phi3, math.pi))


@dataclass(frozen=True)
class KrausPair:
    A0: NDArray[np.complex128]
    A1: NDArray[np.complex128]

    def __iter__(self):
        yield self.A0
        yield self.A1

    def completeness(self) -> NDArray[np.complex128]:
        """Return A0^dag A0 + A1^dag A1 (the identity for a valid pair)."""
        return self.A0.conj().T @ self.A0 + self.A1.conj().T @ self.A1


@dataclass(frozen=True)
class PauliVec:
    """Coefficients of an operator in the basis (I, X, Y, Z).

    Coefficients are real for Hermitian operators and complex otherwise
    (e.g. |R><L| = (X + iY)/2).
    """

    r0: complex
    r1: complex
    r2: complex
    r3: complex

    @classmethod
    def from_array(cls, v) -> "PauliVec":
        v = np.asarray(v)
        if v.shape != (4,):
            raise ValueError(f"expected 4 Pauli coefficients, got shape {v.shape}")
        vals = [complex(x) for x in v]
        if all(x.imag == 0.0 for x in vals):
            return cls(*(x.real for x in vals))
        return cls(*vals)

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([self.r0, self.r1, self.r2, self.r3], dtype=np.complex128)

    def is_real(self, tol: float = ALGEBRA_TOL) -> bool:
        return bool(np.all(np.abs(self.as_array().imag) <= tol))


HADAMARD: NDArray[np.complex128] = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)


def make_coin(params: CoinParams) -> NDArray[np.complex128]:
    """Return the general unitary coin

    [[cos t,            e^{i phi1} sin t],
     [e^{i phi2} sin t, -e^{i(phi1+phi2)} cos t]].
    """
    c, s = math.cos(params.theta), math.sin(params.theta)
    e1 = np.exp(1j * params.phi1)
    e2 = np.exp(1j * params.phi2)
    return np.array([[c, e1 * s], [e2 * s, -e1 * e2 * c]], dtype=np.complex128)


def flip_unitary(phi: float) -> NDArray[np.complex128]:
    """U0 = e^{i phi}|R><L| - e^{-i phi}|L><R|, the unitary part of A0."""
    return np.array([[0.0, np.exp(1j * phi)], [-np.exp(-1j * phi), 0.0]], dtype=np.complex128)


def make_flip_coin(params: CoinParams) -> NDArray[np.complex128]:
    """Return the alternate coin D = C @ U0(phi1).

    This is the coin actually applied on the decoherence branch when
    phi3 == phi1:

    [[-sin t,           e^{i phi1} cos t],
     [e^{i phi2} cos t, e^{i(phi1+phi2)} sin t]]
    """
    c, s = math.cos(params.theta), math.sin(params.theta)
    e1 = np.exp(1j * params.phi1)
    e2 = np.exp(1j * params.phi2)
    return np.array([[-s, e1 * c], [e2 * c, e1 * e2 * s]], dtype=np.complex128)


def make_kraus(chan: ChannelParams) -> KrausPair:
    """Kraus pair A0 = sqrt(p) U0(phi3), A1 = sqrt(1 - p) I."""
    a0 = math.sqrt(chan.p) * flip_unitary(chan.phi3)
    a1 = math.sqrt(1.0 - chan.p) * np.eye(2, dtype=np.complex128)
    return KrausPair(a0, a1)


def apply_channel(rho, kraus: KrausPair) -> NDArray[np.complex128]:
    """Return sum_n A_n rho A_n^dagger.

    The map is linear, so any 2x2 operator is accepted, not just states.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    return sum(a @ rho @ a.conj().T for a in kraus)


def pauli_expand(op) -> PauliVec:
    """Coefficients r_i = Tr(op sigma_i) / 2 of an arbitrary 2x2 operator."""
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op.shape}")
    # Tr(op sigma_i) = sum_ab op[a, b] sigma_i[b, a]
    r = 0.5 * np.einsum("ab,iba->i", op, PAULI)
    return PauliVec.from_array(r)


def pauli_decompose(rho, tol: float = ALGEBRA_TOL) -> PauliVec:
    """Real Pauli coefficients of a Hermitian 2x2 matrix.

    Raises
    ------
    InvalidStateError
        If ``rho`` departs from Hermiticity by more than ``tol``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {rho.shape}")
    dev = np.abs(rho - rho.conj().T).max()
    if dev > tol:
        raise InvalidStateError(f"operator is not Hermitian (max deviation {dev:.3e})")
    r = (0.5 * np.einsum("ab,iba->i", rho, PAULI)).real
    return PauliVec(*(float(x) for x in r))


def pauli_reconstruct(v: PauliVec) -> NDArray[np.complex128]:
    """Return r0 I + r1 X + r2 Y + r3 Z."""
    return np.einsum("i,iab->ab", v.as_array(), PAULI)


def coin_state(a: complex, b: complex) -> NDArray[np.complex128]:
    """Density matrix of the normalized pure coin state a|R> + b|L>."""
    psi = np.array([a, b], dtype=np.complex128)
    n = np.linalg.norm(psi)
    if n == 0.0:
        raise InvalidStateError("zero coin vector")
    psi = psi / n
    return np.outer(psi, psi.conj())


def eigvals_2x2(m) -> tuple[float, float]:
    """Eigenvalues (ascending) of a Hermitian 2x2 matrix via trace and determinant."""
    m = np.asarray(m)
    half_tr = 0.5 * (m[0, 0].real + m[1, 1].real)
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    disc = math.sqrt(max(half_tr * half_tr - det, 0.0))
    return half_tr - disc, half_tr + disc


def validate_state(rho, trace: float = 1.0) -> NDArray[np.complex128]:
    """Check that ``rho`` is a Hermitian, positive coin density of the given trace."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise InvalidStateError(f"coin density must be 2x2, got shape {rho.shape}")
    dev = np.abs(rho - rho.conj().T).max()
    if dev > ALGEBRA_TOL:
        raise InvalidStateError(f"coin density is not Hermitian (max deviation {dev:.3e})")
    tr = np.trace(rho).real
    if abs(tr - trace) > ALGEBRA_TOL:
        raise InvalidStateError(f"coin density has trace {tr!r}, expected {trace!r}")
    lo, _ = eigvals_2x2(rho)
    if lo < -POSITIVITY_TOL:
        raise InvalidStateError(f"coin density has negative eigenvalue {lo:.3e}")
    return rho


def is_unitary(u, tol: float = ALGEBRA_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol)
