"""
Cross-engine verification suite.

Each check compares two or more independent routes (exact density matrix,
closed-form PMFs, momentum superoperators, quadrature, trajectories) at fixed
seeds and fixed tolerances, and returns a ``CheckResult``. ``run_all`` is
what ``coinwalk verify`` executes.

``max_t`` caps every time horizon for a quick run. Checks whose bands only
make sense at their nominal horizon switch to a scale-free form (sigma/sqrt(t))
or leave out the part that needs the full horizon.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analytic import binomial_distribution, binomial_pmf, nonlocal_distribution, quadrature_pmf, stats, tv_distance
from .coinspace import ChannelParams, CoinParams, coin_state, pauli_expand
from .distribution import AmplitudeList
from .lattice_walk import evolve, init_local, init_nonlocal, iter_evolve, position_coherence, position_marginal
from .montecarlo import McConfig, classical_rw_mc, run_mc
from .superop import (
    build_superop_direct,
    build_superop_general,
    build_superop_simplified,
    classical_channel,
    superop_power,
    superop_power_closed,
    superop_trace,
)

__all__ = ["CheckResult", "CHECKS", "run_check", "run_all", "random_coin", "random_channel", "random_coin_density", "random_amplitudes"]

SEED = 20240917


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f} s)"


def random_coin(rng: np.random.Generator) -> CoinParams:
    return CoinParams(rng.uniform(0, 2 * math.pi), rng.uniform(0, math.pi), rng.uniform(0, math.pi))


def random_channel(rng: np.random.Generator) -> ChannelParams:
    return ChannelParams(rng.uniform(0, 1), rng.uniform(0, math.pi))


def random_coin_density(rng: np.random.Generator) -> np.ndarray:
    """Coin density with a uniformly random Bloch vector inside the unit ball."""
    v = rng.normal(size=3)
    v *= rng.uniform() ** (1 / 3) / np.linalg.norm(v)
    return np.array([[1 + v[2], v[0] - 1j * v[1]], [v[0] + 1j * v[1], 1 - v[2]]]) / 2


def random_amplitudes(rng: np.random.Generator, positions=range(-3, 4)) -> AmplitudeList:
    xs = list(positions)
    z = rng.normal(size=(len(xs), 2)) + 1j * rng.normal(size=(len(xs), 2))
    z /= np.linalg.norm(z)
    return AmplitudeList(tuple((x, z[i, 0], z[i, 1]) for i, x in enumerate(xs)))


def _cap(t: int, max_t: int | None) -> int:
    return t if max_t is None else min(t, max_t)


def check_proposition(max_t: int | None = None, fault: bool = False) -> CheckResult:
    rng = np.random.default_rng(SEED)
    horizon = _cap(30, max_t)
    worst = 0.0
    for _ in range(10):
        coin = random_coin(rng)
        chan = classical_channel(coin)
        for _ in range(5):
            state = init_local(0, random_coin_density(rng))
            for s in iter_evolve(state, coin, chan, horizon, check=True):
                ref = binomial_distribution(s.t)
                err = np.abs(position_marginal(s).on_window(-s.t, s.t) - ref.probs).max()
                worst = max(worst, float(err))
    ok = worst <= 1e-9
    return CheckResult(
        "1 proposition exactness",
        ok,
        f"max |exact - binomial| = {worst:.2e} over 10 coins x 5 states, t = 1..{horizon} (tol 1e-9)",
    )


def check_decoherence(max_t: int | None = None, fault: bool = False) -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    horizon = _cap(30, max_t)
    worst = 0.0
    for _ in range(10):
        coin = random_coin(rng)
        chan = classical_channel(coin)
        for _ in range(5):
            state = init_local(0, random_coin_density(rng))
            for s in iter_evolve(state, coin, chan, horizon):
                worst = max(worst, position_coherence(s))
    quantum = evolve(init_local(0, coin_state(1, 0)), CoinParams(math.pi / 4), ChannelParams(0.0), _cap(5, max_t))
    contrast = position_coherence(quantum)
    ok = worst <= 1e-10 and contrast > 0.01
    return CheckResult(
        "2 perfect decoherence",
        ok,
        f"max coherence at p=1/2 = {worst:.2e} (tol 1e-10); p=0 Hadamard t={quantum.t} "
        f"coherence = {contrast:.4f} (> 0.01)",
    )


def check_figure1(max_t: int | None = None, fault: bool = False) -> CheckResult:
    steps = _cap(100, max_t)
    t0 = time.perf_counter()
    qw = run_mc(McConfig(CoinParams(math.pi / 4), ChannelParams(0.5, 0.0), steps=steps, trials=1000, seed=0))
    crw = classical_rw_mc(1000, steps, seed=0)
    elapsed = time.perf_counter() - t0
    exact = stats(binomial_distribution(steps)).sigma
    if steps == 100:
        lo, hi = 9.5, 10.5
    else:
        lo, hi = 0.95 * math.sqrt(steps), 1.05 * math.sqrt(steps)
    ok = lo <= qw.sigma <= hi and lo <= crw.sigma <= hi and abs(exact - math.sqrt(steps)) < 1e-9 and elapsed < 10
    return CheckResult(
        "3 sigma at t=100",
        ok,
        f"t={steps}, 1000 trials: sigma_QW = {qw.sigma:.4f}, sigma_CRW = {crw.sigma:.4f}, "
        f"exact = {exact:.6f}, band [{lo:.3f}, {hi:.3f}], {elapsed:.2f} s (< 10 s)",
    )


def check_superop(max_t: int | None = None, fault: bool = False) -> CheckResult:
    rng = np.random.default_rng(SEED + 3)
    t0 = time.perf_counter()
    general = 0.0
    for _ in range(1000):
        k, kp = rng.uniform(-math.pi, math.pi, 2)
        coin, chan = random_coin(rng), random_channel(rng)
        d = build_superop_direct(k, kp, coin, chan).matrix
        g = build_superop_general(k, kp, coin, chan).matrix
        general = max(general, float(np.abs(d - g).max()))
    simplified = 0.0
    power = 0.0
    horizon = _cap(10, max_t)
    for _ in range(200):
        k, kp = rng.uniform(-math.pi, math.pi, 2)
        coin = random_coin(rng)
        one = build_superop_simplified(k, kp, coin, fault=fault)
        g = build_superop_general(k, kp, coin, classical_channel(coin)).matrix
        simplified = max(simplified, float(np.abs(one.matrix - g).max()))
        for t in range(1, horizon + 1):
            closed = superop_power_closed(k, kp, coin, t).matrix
            power = max(power, float(np.abs(closed - superop_power(one, t).matrix).max()))
    elapsed = time.perf_counter() - t0
    ok = general <= 1e-12 and simplified <= 1e-12 and power <= 1e-10 and elapsed < 5
    return CheckResult(
        "4 superoperator transcription",
        ok,
        f"general vs direct {general:.2e} (tol 1e-12), simplified vs general {simplified:.2e} "
        f"(tol 1e-12), closed power vs product t<={horizon} {power:.2e} (tol 1e-10), {elapsed:.2f} s (< 5 s)",
    )


def check_trace_identity(max_t: int | None = None, fault: bool = False) -> CheckResult:
    rng = np.random.default_rng(SEED + 4)
    horizon = _cap(8, max_t)
    worst = 0.0
    for _ in range(200):
        k, kp = rng.uniform(-math.pi, math.pi, 2)
        coin = random_coin(rng)
        t = int(rng.integers(1, horizon + 1))
        op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        v = pauli_expand(op)
        lt = superop_power(build_superop_direct(k, kp, coin, classical_channel(coin)), t)
        via_power = 2.0 * lt.apply(v).as_array()[0]
        worst = max(worst, abs(via_power - superop_trace(v, k, kp, t)))
    ok = worst <= 1e-10
    return CheckResult(
        "5 trace identity",
        ok,
        f"max |Tr(L^t O) - 2 r0 cos^t(k-k')| = {worst:.2e} over 200 draws, t<={horizon} (tol 1e-10)",
    )


def check_quadrature(max_t: int | None = None, fault: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    horizon = _cap(8, max_t)
    worst = 0.0
    for t in range(horizon + 1):
        for y in range(-t - 2, t + 3):
            worst = max(worst, abs(quadrature_pmf(y, t) - binomial_pmf(y, t)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 20
    return CheckResult(
        "6 quadrature derivation",
        ok,
        f"max |quadrature - binomial| = {worst:.2e} for t<={horizon}, |y|<=t+2 (tol 1e-6), {elapsed:.2f} s (< 20 s)",
    )


def check_nonlocal(max_t: int | None = None, fault: bool = False) -> CheckResult:
    rng = np.random.default_rng(SEED + 6)
    t0 = time.perf_counter()
    horizon = _cap(20, max_t)
    worst = 0.0
    for _ in range(10):
        amps = random_amplitudes(rng)
        coin = random_coin(rng)
        for s in iter_evolve(init_nonlocal(amps), coin, classical_channel(coin), horizon, check=True):
            ref = nonlocal_distribution(amps, s.t)
            err = np.abs(position_marginal(s).on_window(ref.x_min, ref.x_max) - ref.probs).max()
            worst = max(worst, float(err))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 60
    return CheckResult(
        "7 non-local mixture law",
        ok,
        f"max |exact - mixture| = {worst:.2e} over 10 states on -3..3, t = 1..{horizon} (tol 1e-9), {elapsed:.2f} s (< 60 s)",
    )


def _exact_variance(chan: ChannelParams, t: int) -> float:
    s = evolve(init_local(0, coin_state(1, 0)), CoinParams(math.pi / 4), chan, t)
    return stats(position_marginal(s)).variance


def check_scaling(max_t: int | None = None, fault: bool = False) -> CheckResult:
    ts = sorted({_cap(25, max_t), _cap(100, max_t)})
    ratios = {t: _exact_variance(ChannelParams(0.5), t) / t for t in ts}
    diffusive = all(0.999 <= r <= 1.001 for r in ratios.values())
    parts = ", ".join(f"sigma^2({t})/t = {r:.6f}" for t, r in ratios.items())
    if max_t is not None and max_t < 100:
        return CheckResult(
            "8 scaling laws",
            diffusive,
            f"{parts} (band [0.999, 1.001]); ballistic ratio needs t=100, not run",
        )
    ballistic = _exact_variance(ChannelParams(0.0), 100) / _exact_variance(ChannelParams(0.0), 50)
    ok = diffusive and 3.4 <= ballistic <= 4.3
    return CheckResult(
        "8 scaling laws",
        ok,
        f"{parts} (band [0.999, 1.001]); p=0 sigma^2(100)/sigma^2(50) = {ballistic:.4f} (band [3.4, 4.3])",
    )


def check_mc_convergence(max_t: int | None = None, fault: bool = False) -> CheckResult:
    steps = _cap(20, max_t)
    coin, chan = CoinParams(math.pi / 4), ChannelParams(0.5, 0.0)
    mc = run_mc(McConfig(coin, chan, steps=steps, trials=200_000, seed=1))
    exact = position_marginal(evolve(init_local(0, coin_state(1, 0)), coin, chan, steps))
    tv = tv_distance(mc.distribution, exact)
    return CheckResult(
        "9 MC vs exact convergence",
        tv < 0.01,
        f"t={steps}, 2e5 trials: TV = {tv:.5f} (< 0.01)",
    )


CHECKS: list[Callable[..., CheckResult]] = [
    check_proposition,
    check_decoherence,
    check_figure1,
    check_superop,
    check_trace_identity,
    check_quadrature,
    check_nonlocal,
    check_scaling,
    check_mc_convergence,
]


def run_check(check: Callable[..., CheckResult], max_t: int | None = None, fault: bool = False) -> CheckResult:
    """Run one check and record its wall time."""
    t0 = time.perf_counter()
    res = check(max_t=max_t, fault=fault)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(max_t: int | None = None, fault: bool = False, report: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        res = run_check(check, max_t, fault)
        if report is not None:
            report(res.line())
        results.append(res)
    return results
