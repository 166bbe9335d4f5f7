"""
Exact density-matrix evolution of the coin-walker system on a finite window.

The state is stored as ``rho[x, c, x', c']`` with positions offset by
``x_min``; rho[x, :, x', :] is the 2x2 coin block <x|rho|x'>. One step applies
the coin channel, then the coin unitary, then the conditional shift
(|R> moves right, |L> moves left). The window grows by one site per side per
step, so nothing is ever truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numpy.typing import NDArray

from .coinspace import ChannelParams, CoinParams, make_coin, make_kraus, validate_state
from .distribution import AmplitudeList, Distribution
from .errors import InvariantError

__all__ = [
    "WalkDensity",
    "init_local",
    "init_nonlocal",
    "step",
    "evolve",
    "iter_evolve",
    "position_marginal",
    "position_coherence",
    "step_superoperator",
]

TRACE_TOL = 1e-8
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WalkDensity:
    rho: NDArray[np.complex128]
    x_min: int
    t: int = 0

    def __post_init__(self) -> None:
        n = self.rho.shape[0]
        if self.rho.shape != (n, 2, n, 2):
            raise ValueError(f"expected shape (n, 2, n, 2), got {self.rho.shape}")

    @property
    def size(self) -> int:
        return self.rho.shape[0]

    @property
    def x_max(self) -> int:
        return self.x_min + self.size - 1

    def block(self, x: int, xp: int) -> NDArray[np.complex128]:
        """The coin block <x|rho|x'>, zero outside the window."""
        i, j = x - self.x_min, xp - self.x_min
        if 0 <= i < self.size and 0 <= j < self.size:
            return self.rho[i, :, j, :].copy()
        return np.zeros((2, 2), dtype=np.complex128)

    def matrix(self) -> NDArray[np.complex128]:
        """Full (2n, 2n) matrix, row index 2*(x - x_min) + c."""
        n = self.size
        return self.rho.reshape(2 * n, 2 * n)

    def trace(self) -> float:
        return float(np.einsum("xcxc->", self.rho).real)

    def hermiticity_error(self) -> float:
        m = self.matrix()
        return float(np.abs(m - m.conj().T).max())

    def purity(self) -> float:
        m = self.matrix()
        return float(np.einsum("ij,ji->", m, m).real)

    def support(self) -> tuple[int, int] | None:
        """Smallest [lo, hi] holding every nonzero block, or None for the zero state."""
        nz = np.nonzero(np.any(self.rho != 0, axis=(1, 2, 3)) | np.any(self.rho != 0, axis=(0, 1, 3)))[0]
        if nz.size == 0:
            return None
        return self.x_min + int(nz[0]), self.x_min + int(nz[-1])

    def check(self, tol: float = TRACE_TOL) -> "WalkDensity":
        drift = abs(self.trace() - 1.0)
        if drift > tol:
            raise InvariantError(f"trace drifted by {drift:.3e} at t={self.t}")
        herm = self.hermiticity_error()
        if herm > HERMITIAN_TOL:
            raise InvariantError(f"Hermiticity error {herm:.3e} at t={self.t}")
        return self


def init_local(x0: int, coin_state) -> WalkDensity:
    """Walker at ``x0`` with the given 2x2 coin density."""
    rho_c = validate_state(coin_state)
    rho = np.zeros((1, 2, 1, 2), dtype=np.complex128)
    rho[0, :, 0, :] = rho_c
    return WalkDensity(rho, int(x0), 0)


def init_nonlocal(amps: AmplitudeList) -> WalkDensity:
    """Pure state |psi><psi| with |psi> = sum_x |x> (a_x|R> + b_x|L>)."""
    psi = amps.vector()
    rho = np.einsum("xa,yb->xayb", psi, psi.conj())
    return WalkDensity(rho, amps.x_min, 0)


def step_superoperator(coin: CoinParams, chan: ChannelParams) -> NDArray[np.complex128]:
    """Combined coin map as a 4x4 matrix on (c, c') pairs.

    Entry [(a, c), (b, d)] = sum_n K_n[a, b] conj(K_n[c, d]) with K_n = C A_n.
    """
    c = make_coin(coin)
    m = np.zeros((2, 2, 2, 2), dtype=np.complex128)
    for a in make_kraus(chan):
        k = c @ a
        m += np.einsum("ab,cd->acbd", k, k.conj())
    return m.reshape(4, 4)


def _apply_coin_map(rho: NDArray[np.complex128], m4: NDArray[np.complex128]) -> NDArray[np.complex128]:
    n = rho.shape[0]
    # (x, x', c, c') rows of 4 coin entries, mapped independently per block
    flat = rho.transpose(0, 2, 1, 3).reshape(n * n, 4)
    out = (flat @ m4.T).reshape(n, n, 2, 2)
    return out.transpose(0, 2, 1, 3)


def _shift(rho: NDArray[np.complex128]) -> NDArray[np.complex128]:
    n = rho.shape[0]
    out = np.zeros((n + 2, 2, n + 2, 2), dtype=np.complex128)
    # new index = old index + 1 + (+1 for R, -1 for L)
    off = (2, 0)
    for c in (0, 1):
        for cp in (0, 1):
            out[off[c] : off[c] + n, c, off[cp] : off[cp] + n, cp] = rho[:, c, :, cp]
    return out


def _step(state: WalkDensity, m4: NDArray[np.complex128]) -> WalkDensity:
    rho = _shift(_apply_coin_map(state.rho, m4))
    return WalkDensity(rho, state.x_min - 1, state.t + 1)


def step(state: WalkDensity, coin: CoinParams, chan: ChannelParams) -> WalkDensity:
    """One decoherent step: channel, coin, conditional shift."""
    return _step(state, step_superoperator(coin, chan))


def iter_evolve(
    state: WalkDensity, coin: CoinParams, chan: ChannelParams, t: int, check: bool = False
) -> Iterator[WalkDensity]:
    """Yield the state after each of ``t`` steps."""
    m4 = step_superoperator(coin, chan)
    for _ in range(int(t)):
        state = _step(state, m4)
        if check:
            state.check()
        yield state


def evolve(
    state: WalkDensity, coin: CoinParams, chan: ChannelParams, t: int, check: bool = True
) -> WalkDensity:
    """Apply ``t`` steps; with ``check`` the trace and Hermiticity are verified each step."""
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    for state in iter_evolve(state, coin, chan, t, check=check):
        pass
    return state


def position_marginal(state: WalkDensity) -> Distribution:
    """p(x) = Tr_c <x|rho|x>."""
    probs = np.einsum("xcxc->x", state.rho).real.copy()
    return Distribution(state.x_min, probs, state.t)


def position_coherence(state: WalkDensity) -> float:
    """Largest |<x|rho_w|x'>| over x != x' of the coin-traced position matrix."""
    if state.size == 1:
        return 0.0
    rw = np.abs(np.einsum("xcyc->xy", state.rho))
    np.fill_diagonal(rw, 0.0)
    return float(rw.max())
