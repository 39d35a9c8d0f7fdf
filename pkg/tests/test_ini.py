import numpy as np
import pytest

from mnnoma.channel import cfr
from mnnoma.ini import (CpViolationError, frame_mse, ini_ordering1, ini_ordering2,
                        ini_ordering2_all, mse_ordering1, mse_ordering2, mse_vector)
from mnnoma.numerology import make_pair, numerology_from_index, pair_from_indices
from mnnoma.ofdm import OfdmOperatorSet, build_frame_user2

from conftest import crandn

METHODS = ("structured", "fft", "dense")


@pytest.mark.parametrize("method", METHODS)
def test_zero_channel(tiny_pair, method):
    assert not ini_ordering1(np.zeros(2), tiny_pair, method).gamma_mat.any()
    for m in (1, 2):
        assert not ini_ordering2(np.zeros(2), tiny_pair, m, method).gamma_mat.any()


@pytest.mark.parametrize("method", METHODS)
def test_same_numerology_reduction(rng, method):
    num = numerology_from_index(5)
    pair = make_pair(num, num)
    h = crandn(rng, 8)
    diag = np.diag(cfr(h, 128))
    np.testing.assert_allclose(ini_ordering1(h, pair, method).gamma_mat, diag, atol=1e-10)
    np.testing.assert_allclose(ini_ordering2(h, pair, 1, method).gamma_mat, diag, atol=1e-10)


def test_brute_force_columns(tiny_pair):
    """Column j: modulate the j-th unit user-2 frame, pass it through, demodulate as user 1."""
    ops1, ops2 = OfdmOperatorSet(tiny_pair.user1), OfdmOperatorSet(tiny_pair.user2)
    cols = []
    for j in range(8):
        e = np.zeros(8, dtype=complex)
        e[j] = 1
        x = build_frame_user2(e, ops2, 2)
        cols.append(ops1.demodulate(x))
    oracle = np.array(cols).T
    for method in METHODS:
        np.testing.assert_allclose(ini_ordering1([1.0], tiny_pair, method).gamma_mat, oracle,
                                   atol=1e-12)


def test_identity_channel_slices_have_equal_mse(tiny_pair):
    g1 = ini_ordering2([1.0], tiny_pair, 1, "dense").gamma_mat
    g2 = ini_ordering2([1.0], tiny_pair, 2, "dense").gamma_mat
    np.testing.assert_allclose(np.abs(g1), np.abs(g2), atol=1e-12)
    np.testing.assert_allclose(mse_vector(g1).gamma, mse_vector(g2).gamma, atol=1e-12)


@pytest.mark.parametrize("ntaps", [1, 2, 4])
def test_routes_agree(rng, pair45, ntaps):
    h1, h2 = crandn(rng, ntaps), crandn(rng, ntaps)
    ref = ini_ordering1(h2, pair45, "dense").gamma_mat
    for method in ("fft", "structured"):
        np.testing.assert_allclose(ini_ordering1(h2, pair45, method).gamma_mat, ref, atol=1e-10)
    for m in (1, 2):
        ref = ini_ordering2(h1, pair45, m, "dense").gamma_mat
        for method in ("fft", "structured"):
            np.testing.assert_allclose(ini_ordering2(h1, pair45, m, method).gamma_mat, ref,
                                       atol=1e-10)


def test_routes_agree_beyond_cp(rng, tiny_pair):
    h = crandn(rng, 4)  # three samples of spread, longer than either CP
    ref1 = ini_ordering1(h, tiny_pair, "dense", strict=False).gamma_mat
    np.testing.assert_allclose(ini_ordering1(h, tiny_pair, strict=False).gamma_mat, ref1, atol=1e-12)
    for m in (1, 2):
        ref2 = ini_ordering2(h, tiny_pair, m, "dense", strict=False).gamma_mat
        np.testing.assert_allclose(ini_ordering2(h, tiny_pair, m, strict=False).gamma_mat, ref2,
                                   atol=1e-12)
    with pytest.raises(CpViolationError):
        ini_ordering1(h, tiny_pair)


def test_ordering2_m_range(tiny_pair):
    with pytest.raises(ValueError):
        ini_ordering2([1.0], tiny_pair, 3)
    assert [g.m for g in ini_ordering2_all([1.0], tiny_pair)] == [1, 2]


def test_mse_vector_examples(rng):
    np.testing.assert_array_equal(mse_vector(np.eye(4)).gamma, np.ones(4))
    np.testing.assert_array_equal(mse_vector(np.array([[1, 1j]])).gamma, [2.0])
    g = crandn(rng, 6, 10)
    d = (rng.integers(0, 2, (100_000, 10)) * 2 - 1 + 1j * (rng.integers(0, 2, (100_000, 10)) * 2 - 1)) / np.sqrt(2)
    empirical = np.mean(np.abs(d @ g.T) ** 2, axis=0)
    np.testing.assert_allclose(empirical, mse_vector(g).gamma, rtol=0.02)


def test_mse_helpers_match_matrices(rng, pair45):
    h1, h2 = crandn(rng, 3), crandn(rng, 3)
    np.testing.assert_allclose(mse_ordering1(h2, pair45), mse_vector(ini_ordering1(h2, pair45)).gamma,
                               rtol=1e-12)
    per_m = ini_ordering2_all(h1, pair45)
    stacked = np.array([mse_vector(g).gamma for g in per_m])
    np.testing.assert_allclose(mse_ordering2(h1, pair45), stacked, rtol=1e-10)
    np.testing.assert_allclose(frame_mse(per_m).gamma, stacked.mean(0), rtol=1e-12)
    w = np.zeros((256, 2))
    w[:, 0] = 1
    w[:128, 1] = 1
    both = mse_ordering2(h1, pair45, w)
    np.testing.assert_allclose(both[..., 0], stacked, rtol=1e-10)


def test_flat_channel_even_subcarriers_suffer_more():
    pair = pair_from_indices(4, 5)
    g = mse_vector(ini_ordering1([1.0], pair)).gamma
    assert (g[0::2] > g[1::2]).all()


def test_gamma_flattening_order(tiny_pair):
    """Column (m-1)*N_act2 + o carries subcarrier o of short symbol m."""
    g = ini_ordering1([1.0], tiny_pair, "dense").gamma_mat
    ops1, ops2 = OfdmOperatorSet(tiny_pair.user1), OfdmOperatorSet(tiny_pair.user2)
    d = np.zeros(4, dtype=complex)
    d[3] = 1
    x = np.r_[np.zeros(5), ops2.modulate(d)]
    np.testing.assert_allclose(g[:, 4 + 3], ops1.demodulate(x), atol=1e-12)
