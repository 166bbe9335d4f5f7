"""
Trajectory (unravelled) simulation of the decoherent walk, plus a classical
random-walk sampler.

Both Kraus operators of the flip channel are multiples of unitaries, so the
channel is reproduced exactly by an ensemble of pure states: at every step a
trajectory takes the flip branch (U0 then C) with probability p and the plain
branch (C) otherwise, then shifts. No renormalisation is needed.

Randomness is keyed per trial: trial i of master seed s draws from a Philox
stream with key (s, i) and counter 0. Trials are processed in fixed-size
chunks whose partial histograms are summed in chunk order, so results are
bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .analytic import stats
from .coinspace import ChannelParams, CoinParams, flip_unitary, is_unitary, make_coin, make_kraus
from .distribution import AmplitudeList, Distribution

__all__ = [
    "McConfig",
    "McResult",
    "branch_unitaries",
    "trial_uniforms",
    "sample_trajectory",
    "run_mc",
    "classical_rw_mc",
    "CHUNK",
]

CHUNK = 64
UNITARY_TOL = 1e-10
_U64 = 1 << 64


def branch_unitaries(coin: CoinParams, chan: ChannelParams) -> tuple[NDArray, NDArray]:
    """Per-step unitaries (plain, flip) = (C, C @ U0(phi3)).

    Checks that every nonzero Kraus operator, divided by its weight, is
    unitary; that is what makes the pure-state unravelling exact.
    """
    for op, w in zip(make_kraus(chan), (chan.p, 1.0 - chan.p)):
        if w > 0.0 and not is_unitary(op / math.sqrt(w), UNITARY_TOL):
            raise ValueError("channel Kraus operators are not proportional to unitaries")
    c = make_coin(coin)
    return c, c @ flip_unitary(chan.phi3)


def _check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed < _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


@dataclass(frozen=True)
class McConfig:
    coin: CoinParams = field(default_factory=CoinParams)
    chan: ChannelParams = field(default_factory=ChannelParams)
    steps: int = 100
    trials: int = 1000
    seed: int = 0
    initial: AmplitudeList = field(default_factory=AmplitudeList.local)

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps!r}")
        object.__setattr__(self, "seed", _check_seed(self.seed))
        branch_unitaries(self.coin, self.chan)

    @property
    def window(self) -> tuple[int, int]:
        return self.initial.x_min - self.steps, self.initial.x_max + self.steps


@dataclass(frozen=True, eq=False)
class McResult:
    distribution: Distribution
    seed: int
    trials: int

    @property
    def mean(self) -> float:
        return stats(self.distribution).mean

    @property
    def sigma(self) -> float:
        """Standard deviation of the trial-averaged distribution."""
        return stats(self.distribution).sigma

    @property
    def stream_keys(self) -> NDArray[np.uint64]:
        """Philox key (seed, trial) of every trial, shape (trials, 2)."""
        keys = np.empty((self.trials, 2), dtype=np.uint64)
        keys[:, 0] = self.seed
        keys[:, 1] = np.arange(self.trials, dtype=np.uint64)
        return keys


def _raw_streams(seed: int, first: int, count: int, n: int) -> NDArray[np.uint64]:
    """First ``n`` raw 64-bit outputs of the streams keyed (seed, first..first+count-1)."""
    out = np.empty((count, n), dtype=np.uint64)
    if n == 0:
        return out
    bg = np.random.Philox(key=0)
    st = bg.state
    # resetting one generator is equivalent to Philox(key=(seed, i)) and much cheaper
    st["state"]["key"][0] = seed
    st["buffer_pos"] = 4
    st["has_uint32"] = 0
    for j in range(count):
        st["state"]["key"][1] = first + j
        st["state"]["counter"][:] = 0
        bg.state = st
        out[j] = bg.random_raw(n)
    return out


def trial_uniforms(seed: int, first: int, count: int, n: int) -> NDArray[np.float64]:
    """Uniform [0, 1) draws of shape (count, n); row j belongs to trial first + j."""
    raw = _raw_streams(seed, first, count, n)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _chunk_histogram_sum(cfg: McConfig, first: int, count: int) -> NDArray[np.float64]:
    lo, hi = cfg.window
    width = hi - lo + 1
    steps = cfg.steps
    u_plain, u_flip = branch_unitaries(cfg.coin, cfg.chan)
    flips = trial_uniforms(cfg.seed, first, count, steps) < cfg.chan.p

    # Each coin component lives in its own moving frame so the conditional
    # shift is free: window index i of R at time s is stored at i + steps - s,
    # of L at i - steps + s. Both frames coincide with the window at s = steps.
    start = cfg.initial.vector()
    n0 = start.shape[0]
    psi_r = np.zeros((count, width), dtype=np.complex128)
    psi_l = np.zeros_like(psi_r)
    psi_r[:, 2 * steps : 2 * steps + n0] = start[:, 0]
    psi_l[:, :n0] = start[:, 1]
    buf_a = np.empty_like(psi_r)
    buf_b = np.empty_like(psi_r)

    for s in range(steps):
        f = flips[:, s, None]
        u00 = np.where(f, u_flip[0, 0], u_plain[0, 0])
        u01 = np.where(f, u_flip[0, 1], u_plain[0, 1])
        u10 = np.where(f, u_flip[1, 0], u_plain[1, 0])
        u11 = np.where(f, u_flip[1, 1], u_plain[1, 1])
        n = n0 + 2 * s  # active light cone width
        r = psi_r[:, 2 * steps - 2 * s : 2 * steps - 2 * s + n]
        l = psi_l[:, :n]
        ta, tb = buf_a[:, :n], buf_b[:, :n]
        np.multiply(u00, r, out=ta)
        np.multiply(u01, l, out=tb)
        ta += tb
        np.multiply(u11, l, out=tb)
        np.multiply(u10, r, out=l)
        l += tb
        r[...] = ta

    hist = psi_r.real**2 + psi_r.imag**2 + psi_l.real**2 + psi_l.imag**2
    return hist.sum(axis=0)


def _chunks(trials: int) -> list[tuple[int, int]]:
    return [(i, min(CHUNK, trials - i)) for i in range(0, trials, CHUNK)]


def _reduce(parts: list[NDArray[np.float64]]) -> NDArray[np.float64]:
    total = parts[0].copy()
    for part in parts[1:]:
        total += part
    return total


def sample_trajectory(cfg: McConfig, trial_index: int) -> Distribution:
    """|psi|^2 position histogram of a single trajectory."""
    if not 0 <= trial_index < _U64:
        raise ValueError(f"trial index out of range: {trial_index}")
    hist = _chunk_histogram_sum(cfg, int(trial_index), 1)
    return Distribution(cfg.window[0], hist, cfg.steps)


def run_mc(cfg: McConfig, workers: int = 1) -> McResult:
    """Average the trajectory histograms of trials 0 .. trials-1."""
    chunks = _chunks(cfg.trials)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _chunk_histogram_sum(cfg, *c), chunks))
    else:
        parts = [_chunk_histogram_sum(cfg, *c) for c in chunks]
    mean = _reduce(parts) / cfg.trials
    return McResult(Distribution(cfg.window[0], mean, cfg.steps), cfg.seed, cfg.trials)


def _classical_chunk(seed: int, first: int, count: int, steps: int) -> NDArray[np.int64]:
    raw = _raw_streams(seed, first, count, steps)
    rights = (raw >> np.uint64(63)).astype(np.int64).sum(axis=1)
    # position = rights - lefts, shifted so index 0 is -steps
    return np.bincount(2 * rights, minlength=2 * steps + 1)


def classical_rw_mc(trials: int, steps: int, seed: int = 0, workers: int = 1) -> McResult:
    """Histogram of ``trials`` independent fair +/-1 walks of ``steps`` steps from 0."""
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if int(steps) != steps or steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps!r}")
    seed = _check_seed(seed)
    chunks = _chunks(int(trials))
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _classical_chunk(seed, c[0], c[1], steps), chunks))
    else:
        parts = [_classical_chunk(seed, first, count, steps) for first, count in chunks]
    counts = np.sum(parts, axis=0)
    return McResult(Distribution(-steps, counts / trials, steps), seed, int(trials))
