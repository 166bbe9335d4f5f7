"""
Momentum-space superoperator L_{k,k'} acting on Pauli coordinate columns.

For a coin operator O = r0 I + r1 X + r2 Y + r3 Z, one decoherent step in the
(k, k') momentum sector maps

    O -> sum_n C_k A_n O A_n^dag C_{k'}^dag,   C_k = diag(e^{-ik}, e^{ik}) C.

``build_superop_direct`` assembles that map column by column and is the
reference. ``build_superop_general`` is the hand-expanded trigonometric form
for arbitrary (p, phi3). ``build_superop_simplified``, ``superop_power_closed``
and ``reconstruct_evolved`` are closed forms valid only at p = 1/2 with
phi3 = phi1 (mod pi); outside that regime they raise ``RegimeError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coinspace import (
    PAULI,
    ChannelParams,
    CoinParams,
    PauliVec,
    make_coin,
    make_kraus,
    pauli_reconstruct,
)
from .errors import RegimeError

__all__ = [
    "SuperopMatrix",
    "momentum_coin",
    "classical_channel",
    "in_classical_regime",
    "build_superop_direct",
    "build_superop_general",
    "build_superop_simplified",
    "superop_power",
    "superop_power_closed",
    "reconstruct_evolved",
    "superop_trace",
    "evolve_pauli",
]

REGIME_TOL = 1e-12


@dataclass(frozen=True)
class SuperopMatrix:
    matrix: NDArray[np.complex128]
    k: float
    kp: float
    coin: CoinParams
    chan: ChannelParams

    def apply(self, v: PauliVec) -> PauliVec:
        return PauliVec.from_array(self.matrix @ v.as_array())

    def apply_operator(self, op) -> NDArray[np.complex128]:
        """Act on a 2x2 operator and return the 2x2 result."""
        r = 0.5 * np.einsum("ab,iba->i", np.asarray(op, dtype=np.complex128), PAULI)
        return np.einsum("i,iab->ab", self.matrix @ r, PAULI)


def momentum_coin(k: float, coin: CoinParams) -> NDArray[np.complex128]:
    """C_k = (e^{-ik} P_R + e^{ik} P_L) C."""
    phase = np.array([np.exp(-1j * k), np.exp(1j * k)], dtype=np.complex128)
    return phase[:, None] * make_coin(coin)


def classical_channel(coin: CoinParams) -> ChannelParams:
    """The channel p = 1/2, phi3 = phi1 under which the walk is exactly classical."""
    return ChannelParams(0.5, coin.phi1)


def in_classical_regime(coin: CoinParams, chan: ChannelParams, tol: float = REGIME_TOL) -> bool:
    if abs(chan.p - 0.5) > tol:
        return False
    # A0 is only defined up to sign, so phi3 matters modulo pi
    d = math.remainder(chan.phi3 - coin.phi1, math.pi)
    return abs(d) <= tol


def _require_regime(coin: CoinParams, chan: ChannelParams | None) -> ChannelParams:
    if chan is None:
        return classical_channel(coin)
    if not in_classical_regime(coin, chan):
        raise RegimeError(
            f"closed form holds only for p = 1/2 and phi3 = phi1 (mod pi); "
            f"got p={chan.p}, phi3={chan.phi3}, phi1={coin.phi1}"
        )
    return chan


def build_superop_direct(k: float, kp: float, coin: CoinParams, chan: ChannelParams) -> SuperopMatrix:
    """Build L_{k,k'} by pushing each Pauli basis element through the Kraus map."""
    ck = momentum_coin(k, coin)
    ckp_dag = momentum_coin(kp, coin).conj().T
    out = np.zeros((4, 2, 2), dtype=np.complex128)
    for a in make_kraus(chan):
        left = ck @ a
        right = a.conj().T @ ckp_dag
        out += np.einsum("ab,jbc,cd->jad", left, PAULI, right)
    # column j holds the coordinates of L(sigma_j)
    m = 0.5 * np.einsum("jab,iba->ij", out, PAULI)
    return SuperopMatrix(m, float(k), float(kp), coin, chan)


def build_superop_general(k: float, kp: float, coin: CoinParams, chan: ChannelParams) -> SuperopMatrix:
    """Closed-form entries of L_{k,k'} for arbitrary (theta, phi1, phi2, p, phi3)."""
    p = chan.p
    th, f1, f2, f3 = coin.theta, coin.phi1, coin.phi2, chan.phi3
    d = k - kp
    big = k + kp + f2
    sd, cd = math.sin(d), math.cos(d)
    sk, ck = math.sin(big), math.cos(big)
    s2t, c2t = math.sin(2 * th), math.cos(2 * th)

    cos_mix = (p - 1) * math.cos(f1) + p * math.cos(f1 - 2 * f3)
    sin_mix = (p - 1) * math.sin(f1) + p * math.sin(f1 - 2 * f3)
    cos_dif = p * math.cos(f1 - 2 * f3) - (p - 1) * math.cos(f1)
    sin_dif = p * math.sin(f1 - 2 * f3) - (p - 1) * math.sin(f1)
    bias = 2 * p - 1

    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = cd
    m[0, 1] = 1j * cos_mix * sd * s2t
    m[0, 2] = 1j * sd * s2t * sin_dif
    m[0, 3] = 1j * bias * c2t * sd
    m[1, 1] = c2t * ck * cos_mix - sk * sin_mix
    m[1, 2] = cos_dif * sk + c2t * ck * sin_dif
    m[1, 3] = -bias * ck * s2t
    m[2, 1] = c2t * cos_mix * sk + ck * sin_mix
    m[2, 2] = -ck * cos_dif + c2t * sk * sin_dif
    m[2, 3] = -bias * s2t * sk
    m[3, 0] = -1j * sd
    m[3, 1] = -cd * cos_mix * s2t
    m[3, 2] = -cd * s2t * sin_dif
    m[3, 3] = -bias * cd * c2t
    return SuperopMatrix(m, float(k), float(kp), coin, chan)


def build_superop_simplified(
    k: float,
    kp: float,
    coin: CoinParams,
    chan: ChannelParams | None = None,
    *,
    fault: bool = False,
) -> SuperopMatrix:
    """L_{k,k'} at p = 1/2, phi3 = phi1, where it splits into two small blocks.

    ``fault`` negates the (1, 2) entry; it exists only so the verifier can
    prove it detects a corrupted closed form.
    """
    chan = _require_regime(coin, chan)
    f1 = coin.phi1
    big = k + kp + coin.phi2
    d = k - kp
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = math.cos(d)
    m[1, 1] = math.sin(big) * math.sin(f1)
    m[1, 2] = math.sin(big) * math.cos(f1) * (-1.0 if fault else 1.0)
    m[2, 1] = -math.cos(big) * math.sin(f1)
    m[2, 2] = -math.cos(big) * math.cos(f1)
    m[3, 0] = -1j * math.sin(d)
    return SuperopMatrix(m, float(k), float(kp), coin, chan)


def superop_power(op: SuperopMatrix, t: int) -> SuperopMatrix:
    """Repeated matrix product op^t (t >= 0)."""
    if t < 0:
        raise ValueError(f"power must be non-negative, got {t}")
    m = np.eye(4, dtype=np.complex128)
    for _ in range(t):
        m = op.matrix @ m
    return SuperopMatrix(m, op.k, op.kp, op.coin, op.chan)


def _check_steps(t: int) -> int:
    if int(t) != t or t < 1:
        raise ValueError(f"step count must be an integer >= 1, got {t!r}")
    return int(t)


def superop_power_closed(
    k: float, kp: float, coin: CoinParams, t: int, chan: ChannelParams | None = None
) -> SuperopMatrix:
    """Closed form of L_{k,k'}^t at p = 1/2, phi3 = phi1."""
    t = _check_steps(t)
    chan = _require_regime(coin, chan)
    f1 = coin.phi1
    d = k - kp
    big = k + kp + coin.phi2
    damp = math.cos(k + kp + f1 + coin.phi2) ** (t - 1)
    sign = -1.0 if t % 2 == 0 else 1.0  # (-1)^(t+1)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = math.cos(d) ** t
    m[1, 1] = sign * damp * math.sin(f1) * math.sin(big)
    m[1, 2] = sign * damp * math.cos(f1) * math.sin(big)
    m[2, 1] = -sign * damp * math.cos(big) * math.sin(f1)
    m[2, 2] = -sign * damp * math.cos(f1) * math.cos(big)
    m[3, 0] = -1j * math.cos(d) ** (t - 1) * math.sin(d)
    return SuperopMatrix(m, float(k), float(kp), coin, chan)


def reconstruct_evolved(
    v: PauliVec, k: float, kp: float, coin: CoinParams, t: int, chan: ChannelParams | None = None
) -> NDArray[np.complex128]:
    """The 2x2 matrix L_{k,k'}^t O written out entrywise from the closed form."""
    t = _check_steps(t)
    _require_regime(coin, chan)
    r0, r1, r2 = v.r0, v.r1, v.r2
    f1 = coin.phi1
    d = k - kp
    big = k + kp + coin.phi2
    diag = math.cos(d) ** (t - 1)
    damp = math.cos(k + kp + f1 + coin.phi2) ** (t - 1)
    w = r1 * math.sin(f1) + r2 * math.cos(f1)
    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = r0 * np.exp(-1j * d) * diag
    out[0, 1] = -1j * np.exp(-1j * (big - math.pi * t)) * damp * w
    out[1, 0] = 1j * np.exp(1j * (big + math.pi * t)) * damp * w
    out[1, 1] = r0 * np.exp(1j * d) * diag
    return out


def superop_trace(v: PauliVec, k: float, kp: float, t: int) -> complex:
    """Tr(L^t O) = 2 r0 cos^t(k - k'); the other coordinates never reach the trace."""
    t = _check_steps(t)
    return complex(2.0 * v.r0 * math.cos(k - kp) ** t)


def evolve_pauli(v: PauliVec, op: SuperopMatrix, t: int) -> NDArray[np.complex128]:
    """Apply op t times to v and return the reconstructed 2x2 operator."""
    return pauli_reconstruct(superop_power(op, t).apply(v))
