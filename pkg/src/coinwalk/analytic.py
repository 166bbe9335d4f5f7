"""
Closed-form reference distributions and distribution statistics.

The unbiased classical walk after t fair +/-1 steps has

    p(y, t) = t! / (2^t ((t+y)/2)! ((t-y)/2)!)

for |y| <= t with y = t (mod 2), and zero elsewhere. A walk whose starting
site is drawn with weights p_x is the convex mixture sum_x p_x p(y - x, t).
``quadrature_pmf`` evaluates the momentum double integral that produces
p(y, t) numerically, as a check independent of the factorial formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import AmplitudeList, Distribution
from .errors import UnsupportedError

__all__ = [
    "Statistic",
    "binomial_pmf",
    "binomial_distribution",
    "nonlocal_pmf",
    "nonlocal_distribution",
    "quadrature_pmf",
    "stats",
    "tv_distance",
    "QUADRATURE_MAX_T",
]

# above this, exact integer arithmetic is swapped for log-gamma
EXACT_MAX_T = 1024
QUADRATURE_MAX_T = 12


@dataclass(frozen=True)
class Statistic:
    mean: float
    variance: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


def _check_t(t: int) -> int:
    if int(t) != t or t < 0:
        raise ValueError(f"step count must be a non-negative integer, got {t!r}")
    return int(t)


def binomial_pmf(y: int, t: int) -> float:
    """Probability that a fair +/-1 walk started at 0 sits at ``y`` after ``t`` steps."""
    t = _check_t(t)
    y = int(y)
    if abs(y) > t or (t + y) % 2:
        return 0.0
    s = (t + y) // 2
    if t <= EXACT_MAX_T:
        # int / int true division is correctly rounded
        return math.comb(t, s) / (1 << t)
    log_p = math.lgamma(t + 1) - math.lgamma(s + 1) - math.lgamma(t - s + 1) - t * math.log(2.0)
    return math.exp(log_p)


def binomial_distribution(t: int, x0: int = 0) -> Distribution:
    t = _check_t(t)
    probs = np.array([binomial_pmf(y, t) for y in range(-t, t + 1)])
    return Distribution(x0 - t, probs, t)


def nonlocal_pmf(amps: AmplitudeList, y: int, t: int) -> float:
    """Mixture of fair walks started at each site x with weight |a_x|^2 + |b_x|^2."""
    t = _check_t(t)
    return math.fsum(w * binomial_pmf(int(y) - x, t) for x, w in amps.weights().items())


def nonlocal_distribution(amps: AmplitudeList, t: int) -> Distribution:
    t = _check_t(t)
    lo, hi = amps.x_min - t, amps.x_max + t
    probs = np.array([nonlocal_pmf(amps, y, t) for y in range(lo, hi + 1)])
    return Distribution(lo, probs, t)


def quadrature_pmf(y: int, t: int, max_t: int = QUADRATURE_MAX_T) -> float:
    """(2 pi)^-2 double integral of e^{iky} e^{-ik'y} cos^t(k - k') over [-pi, pi)^2.

    Tensor-product trapezoid rule on a uniform periodic grid. The integrand is
    a trigonometric polynomial of degree t + |y| in each variable, so a grid of
    more than t + |y| points per axis integrates it exactly (up to rounding).
    """
    t = _check_t(t)
    if t > max_t:
        raise UnsupportedError(f"quadrature supports t <= {max_t}, got {t}")
    y = int(y)
    n = max(8 * (t + 1), 2 * (t + abs(y)) + 1)
    k = -math.pi + 2.0 * math.pi * np.arange(n) / n
    kk, kp = np.meshgrid(k, k, indexing="ij")
    integrand = np.exp(1j * y * (kk - kp)) * np.cos(kk - kp) ** t
    return float(integrand.mean().real)


def stats(d: Distribution) -> Statistic:
    x = d.positions.astype(np.float64)
    w = d.probs
    total = math.fsum(w)
    mean = math.fsum(w * x) / total
    var = math.fsum(w * (x - mean) ** 2) / total
    return Statistic(mean, max(var, 0.0))


def tv_distance(d1: Distribution, d2: Distribution) -> float:
    """Half the L1 distance over the union of both windows."""
    lo, hi = min(d1.x_min, d2.x_min), max(d1.x_max, d2.x_max)
    return 0.5 * math.fsum(np.abs(d1.on_window(lo, hi) - d2.on_window(lo, hi)))
