import math

import numpy as np
import pytest

from coinwalk.coinspace import ChannelParams, CoinParams, PauliVec, coin_state, pauli_decompose, pauli_expand, pauli_reconstruct
from coinwalk.errors import RegimeError
from coinwalk.lattice_walk import evolve, init_local, position_marginal
from coinwalk.superop import (
    build_superop_direct,
    build_superop_general,
    build_superop_simplified,
    classical_channel,
    evolve_pauli,
    in_classical_regime,
    reconstruct_evolved,
    superop_power,
    superop_power_closed,
    superop_trace,
)
from coinwalk.verify import random_channel, random_coin, random_coin_density


def _draw(rng):
    k, kp = rng.uniform(-math.pi, math.pi, 2)
    return k, kp, random_coin(rng)


def test_diagonal_sector_first_column():
    rng = np.random.default_rng(1)
    for _ in range(20):
        k = rng.uniform(-math.pi, math.pi)
        m = build_superop_general(k, k, random_coin(rng), random_channel(rng)).matrix
        assert m[0, 0] == 1
        assert m[3, 0] == 0


def test_general_matches_direct(rng):
    for _ in range(1000):
        k, kp, coin = _draw(rng)
        chan = random_channel(rng)
        d = build_superop_direct(k, kp, coin, chan).matrix
        g = build_superop_general(k, kp, coin, chan).matrix
        np.testing.assert_allclose(g, d, rtol=0, atol=1e-12)


def test_general_reduces_to_simplified(rng):
    for _ in range(200):
        k, kp, coin = _draw(rng)
        g = build_superop_general(k, kp, coin, classical_channel(coin)).matrix
        s = build_superop_simplified(k, kp, coin).matrix
        np.testing.assert_allclose(s, g, rtol=0, atol=1e-12)


def test_direct_hadamard_trace_column():
    m = build_superop_direct(0.0, 0.0, CoinParams(math.pi / 4), ChannelParams(0.5, 0.0)).matrix
    assert m[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_direct_is_linear(rng):
    for _ in range(50):
        k, kp, coin = _draw(rng)
        op = build_superop_direct(k, kp, coin, random_channel(rng))
        o1, o2 = (m + m.conj().T for m in rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2)))
        alpha, beta = rng.normal(size=2)
        lhs = op.apply_operator(alpha * o1 + beta * o2)
        rhs = alpha * op.apply_operator(o1) + beta * op.apply_operator(o2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_diagonal_sector_preserves_trace_and_hermiticity(rng):
    for _ in range(100):
        k = rng.uniform(-math.pi, math.pi)
        op = build_superop_direct(k, k, random_coin(rng), random_channel(rng))
        rho = random_coin_density(rng)
        out = rho
        for _ in range(5):
            out = op.apply_operator(out)
            assert abs(np.trace(out) - 1) <= 1e-12
            assert np.abs(out - out.conj().T).max() <= 1e-12


def test_closed_power_first_power_is_simplified(rng):
    for _ in range(50):
        k, kp, coin = _draw(rng)
        np.testing.assert_allclose(
            superop_power_closed(k, kp, coin, 1).matrix,
            build_superop_simplified(k, kp, coin).matrix,
            atol=1e-12,
        )


@pytest.mark.parametrize("t", range(2, 11))
def test_closed_power_matches_product(rng, t):
    for _ in range(50):
        k, kp, coin = _draw(rng)
        brute = superop_power(build_superop_simplified(k, kp, coin), t).matrix
        np.testing.assert_allclose(superop_power_closed(k, kp, coin, t).matrix, brute, atol=1e-10)


def test_closed_power_diagonal_sector():
    coin = CoinParams(0.3, 1.2, 2.5)
    for t in range(1, 12):
        m = superop_power_closed(0.7, 0.7, coin, t).matrix
        assert m[0, 0] == 1
        assert m[3, 0] == 0


def test_closed_forms_check_regime():
    coin = CoinParams(0.3, 1.2, 0.4)
    with pytest.raises(RegimeError):
        build_superop_simplified(0.1, 0.2, coin, ChannelParams(0.4, 1.2))
    with pytest.raises(RegimeError):
        superop_power_closed(0.1, 0.2, coin, 3, ChannelParams(0.5, 0.0))
    # phi3 = phi1 - pi is the same channel
    assert in_classical_regime(coin, ChannelParams(0.5, 1.2 + math.pi))
    build_superop_simplified(0.1, 0.2, coin, ChannelParams(0.5, 1.2 + math.pi))


def test_reconstruct_evolved_diagonal_sector():
    coin = CoinParams(1.0, 0.4, 0.9)
    v = pauli_decompose(coin_state(0.6, 0.8j))
    for t in range(1, 6):
        m = reconstruct_evolved(v, 0.3, 0.3, coin, t)
        assert m[0, 0] == pytest.approx(v.r0, abs=1e-14)
        assert m[1, 1] == pytest.approx(v.r0, abs=1e-14)


def test_reconstruct_evolved_matches_closed_power(rng):
    for _ in range(200):
        k, kp, coin = _draw(rng)
        t = int(rng.integers(1, 10))
        v = pauli_expand(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        via_power = pauli_reconstruct(superop_power_closed(k, kp, coin, t).apply(v))
        got = reconstruct_evolved(v, k, kp, coin, t)
        np.testing.assert_allclose(got, via_power, atol=1e-10)
        assert np.trace(got) == pytest.approx(2 * v.r0 * math.cos(k - kp) ** t, abs=1e-10)


def test_trace_of_coherences_vanishes(rng):
    rl = pauli_expand(np.array([[0, 1], [0, 0]]))
    lr = pauli_expand(np.array([[0, 0], [1, 0]]))
    assert rl.r0 == 0
    for _ in range(20):
        k, kp = rng.uniform(-math.pi, math.pi, 2)
        t = int(rng.integers(1, 20))
        assert superop_trace(rl, k, kp, t) == 0
        assert superop_trace(lr, k, kp, t) == 0


def test_trace_of_diagonal_sector():
    v = pauli_decompose(np.diag([1.0, 0.0]))
    for t in (1, 2, 7):
        assert superop_trace(v, 0.4, 0.4, t) == pytest.approx(1.0)


def test_trace_matches_direct_power(rng):
    for _ in range(200):
        k, kp, coin = _draw(rng)
        t = int(rng.integers(1, 9))
        v = pauli_expand(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        out = evolve_pauli(v, build_superop_direct(k, kp, coin, classical_channel(coin)), t)
        assert abs(np.trace(out) - superop_trace(v, k, kp, t)) <= 1e-10
        assert abs(np.trace(reconstruct_evolved(v, k, kp, coin, t)) - superop_trace(v, k, kp, t)) <= 1e-10


def test_trace_damping_monotone(rng):
    for _ in range(50):
        k, kp, coin = _draw(rng)
        v = pauli_decompose(random_coin_density(rng))
        mags = [abs(superop_trace(v, k, kp, t)) for t in range(1, 15)]
        assert all(b <= a + 1e-15 for a, b in zip(mags, mags[1:]))
        assert all(m <= 2 * abs(v.r0) * abs(math.cos(k - kp)) ** t + 1e-15 for t, m in enumerate(mags, 1))


def _momentum_marginal(coin, chan, rho0, t, ys):
    """p(y) = (2 pi)^-2 sum over a periodic (k, k') grid of e^{i(k-k')y} Tr(L^t rho0)."""
    n = 2 * (t + max(abs(y) for y in ys)) + 2
    ks = -math.pi + 2 * math.pi * np.arange(n) / n
    v = pauli_decompose(rho0)
    traces = np.empty((n, n), dtype=complex)
    for i, k in enumerate(ks):
        for j, kp in enumerate(ks):
            out = superop_power(build_superop_direct(k, kp, coin, chan), t).apply(v).as_array()
            traces[i, j] = 2 * out[0]
    phase = np.exp(1j * np.subtract.outer(ks, ks)[None, :, :] * np.array(ys)[:, None, None])
    return (phase * traces).mean(axis=(1, 2)).real


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.9])
def test_momentum_route_matches_lattice(p):
    rng = np.random.default_rng(int(p * 10))
    coin = random_coin(rng)
    chan = ChannelParams(p, rng.uniform(0, math.pi))
    rho0 = random_coin_density(rng)
    t = 4
    ys = list(range(-t, t + 1))
    exact = position_marginal(evolve(init_local(0, rho0), coin, chan, t)).on_window(-t, t)
    np.testing.assert_allclose(_momentum_marginal(coin, chan, rho0, t, ys), exact, atol=1e-12)


def test_pauli_vec_from_array_keeps_complex():
    v = PauliVec.from_array(np.array([0, 0.5, 0.5j, 0]))
    assert v.r2 == 0.5j
