import numpy as np
import pytest

from mnnoma.channel import EPA, apply_channel, cfr, draw_realization
from mnnoma.numerology import pair_from_indices
from mnnoma.ofdm import OfdmOperatorSet
from mnnoma.rates import PowerSplit
from mnnoma.simchain import (draw_frame, empirical_interference, front_end_user1,
                             front_end_user2, front_end_user2_all, genie_sic, qpsk,
                             synthesize_frame)


@pytest.fixture
def chans():
    rng = np.random.default_rng(11)
    return draw_realization(EPA, 15.36e6, rng), draw_realization(EPA, 15.36e6, rng)


def test_qpsk_unit_energy(rng):
    s = qpsk(rng, 10_000)
    np.testing.assert_allclose(np.abs(s), 1.0)


def test_single_user_noiseless(pair45, chans, rng):
    h1, h2 = chans
    frame = draw_frame(pair45, rng)
    rx = synthesize_frame(frame, PowerSplit(0.7, 0.0, 0.7), h1, h2, 0.0, rng, pair45)
    x1 = OfdmOperatorSet(pair45.user1).modulate(frame.d1)
    np.testing.assert_array_equal(rx.r, apply_channel(h1.h, np.sqrt(0.7) * x1))
    psi1 = cfr(h1, 256)
    np.testing.assert_allclose(front_end_user1(rx.r, pair45), np.sqrt(0.7) * psi1 * frame.d1,
                               atol=1e-12)


def test_user2_front_end(pair45, chans, rng):
    h1, h2 = chans
    frame = draw_frame(pair45, rng)
    rx = synthesize_frame(frame, PowerSplit(0.0, 0.4, 0.4), h1, h2, 0.0, rng, pair45)
    psi2 = cfr(h2, 128)
    d2 = frame.d2_tilde.reshape(2, 128)
    for m in (1, 2):
        np.testing.assert_allclose(front_end_user2(rx.r, pair45, m), np.sqrt(0.4) * psi2 * d2[m - 1],
                                   atol=1e-12)
    with pytest.raises(ValueError):
        front_end_user2(rx.r, pair45, 3)


def test_front_ends_zero_and_linear(pair45, rng):
    assert not front_end_user1(np.zeros(pair45.frame_len), pair45).any()
    assert not front_end_user2_all(np.zeros(pair45.frame_len), pair45).any()
    a = rng.standard_normal(pair45.frame_len) + 0j
    b = rng.standard_normal(pair45.frame_len) + 0j
    lhs = front_end_user1(2 * a - 3j * b, pair45)
    np.testing.assert_allclose(lhs, 2 * front_end_user1(a, pair45) - 3j * front_end_user1(b, pair45),
                               atol=1e-12)


def test_noise_variance(pair45, chans, rng):
    h1, h2 = chans
    frame = draw_frame(pair45, rng, 400)
    rx = synthesize_frame(frame, PowerSplit(0.0, 0.0, 0.0), h1, h2, 0.3, rng, pair45)
    np.testing.assert_array_equal(rx.r, rx.w)
    assert rx.r.size >= 100_000
    assert np.mean(np.abs(rx.r) ** 2) == pytest.approx(0.3, rel=0.02)


def test_energy_sum_of_parts(pair45, chans, rng):
    h1, h2 = chans
    split, n0, n = PowerSplit(0.6, 0.4, 1.0), 0.05, 10_000
    frame = draw_frame(pair45, rng, n)
    rx = synthesize_frame(frame, split, h1, h2, n0, rng, pair45)
    parts = (np.mean(np.sum(np.abs(apply_channel(h1.h, rx.s1)) ** 2, -1))
             + np.mean(np.sum(np.abs(apply_channel(h2.h, rx.s2)) ** 2, -1))
             + pair45.frame_len * n0)
    assert np.mean(np.sum(np.abs(rx.r) ** 2, -1)) == pytest.approx(parts, rel=0.03)
    np.testing.assert_allclose(rx.reconstruct(), rx.r, atol=1e-12)


@pytest.mark.parametrize("order", [1, 2])
def test_genie_sic_cancels(pair45, chans, rng, order):
    h1, h2 = chans
    frame = draw_frame(pair45, rng, 3)
    split = PowerSplit(0.55, 0.45, 1.0)
    rx = synthesize_frame(frame, split, h1, h2, 0.0, rng, pair45)
    _, second = genie_sic(rx, frame, split, h1, h2, pair45, order)
    if order == 1:
        want = np.sqrt(0.45) * cfr(h2, 128) * frame.d2_tilde.reshape(3, 2, 128)
    else:
        want = np.sqrt(0.55) * cfr(h1, 256) * frame.d1
    assert np.abs(second - want).max() <= 1e-10


def test_genie_sic_noise_only(pair45, chans, rng):
    h1, h2 = chans
    frame = draw_frame(pair45, rng)
    rx = synthesize_frame(frame, PowerSplit(0.0, 0.0, 0.0), h1, h2, 0.1, rng, pair45)
    first, second = genie_sic(rx, frame, PowerSplit(0.0, 0.0, 0.0), h1, h2, pair45, 1)
    np.testing.assert_allclose(first, front_end_user1(rx.w, pair45), atol=1e-15)
    np.testing.assert_allclose(second, front_end_user2_all(rx.w, pair45), atol=1e-15)


def test_empirical_interference_flat_q1(rng):
    pair = pair_from_indices(5, 5)
    for ordering in (1, 2):
        v = empirical_interference(pair, [1.0], [1.0], 1.0, ordering, 10_000, rng)
        np.testing.assert_allclose(v.ravel(), 1.0, rtol=0.03)


def test_empirical_interference_zero_power(pair45, chans, rng):
    h1, h2 = chans
    assert not empirical_interference(pair45, h1, h2, 0.0, 1, 100, rng).any()
    with pytest.raises(ValueError):
        empirical_interference(pair45, h1, h2, 1.0, 1, 99, rng)


def test_determinism(pair45, chans):
    h1, h2 = chans
    outs = []
    for _ in range(2):
        rng = np.random.default_rng(5)
        frame = draw_frame(pair45, rng, 4)
        outs.append(synthesize_frame(frame, PowerSplit(0.5, 0.5, 1.0), h1, h2, 0.1, rng, pair45).r)
    np.testing.assert_array_equal(*outs)
