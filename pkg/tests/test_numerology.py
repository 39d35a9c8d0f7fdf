import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mnnoma.numerology import (CATALOG, IncompatibleNumerologiesError, Numerology,
                               UnsupportedNumerologyError, make_pair, numerology_from_index,
                               pair_from_indices)


@pytest.mark.parametrize("mu,n,ncp", [(0, 4096, 288), (1, 2048, 144), (2, 1024, 72),
                                      (3, 512, 36), (4, 256, 18), (5, 128, 9)])
def test_catalog_entries(mu, n, ncp):
    num = numerology_from_index(mu)
    assert (num.n_fft, num.n_cp) == (n, ncp)
    assert num.n_cp * 128 == 9 * num.n_fft
    assert num.delta_f == 15e3 * 2**mu
    assert num.bandwidth == pytest.approx(61.44e6)


def test_symbol_length():
    assert numerology_from_index(3).symbol_len == 548


def test_unknown_index():
    with pytest.raises(UnsupportedNumerologyError):
        numerology_from_index(6)


@pytest.mark.parametrize("mu1,mu2,q", [(4, 5, 2), (1, 5, 16), (1, 1, 1)])
def test_pair_ratio(mu1, mu2, q):
    assert pair_from_indices(mu1, mu2).q == q


def test_every_ordered_pair_tiles():
    count = 0
    for mu1, mu2 in itertools.combinations_with_replacement(sorted(CATALOG), 2):
        p = pair_from_indices(mu1, mu2)
        assert p.user1.symbol_len == p.q * p.user2.symbol_len
        count += 1
    assert count == 21


def test_wrong_order_rejected():
    with pytest.raises(IncompatibleNumerologiesError):
        pair_from_indices(5, 4)


def test_bandwidth_mismatch_rejected():
    with pytest.raises(IncompatibleNumerologiesError, match="bandwidth"):
        make_pair(Numerology(0, 8, 2, 1.0), Numerology(1, 4, 1, 3.0))


def test_tiling_violation_rejected():
    with pytest.raises(IncompatibleNumerologiesError, match="tile"):
        make_pair(Numerology(0, 8, 2, 1.0), Numerology(1, 4, 2, 2.0))


def test_active_set_validation():
    with pytest.raises(ValueError):
        Numerology(0, 8, 2, 1.0, (3, 1))
    with pytest.raises(ValueError):
        Numerology(0, 8, 2, 1.0, (0, 8))
    with pytest.raises(ValueError):
        Numerology(0, 6, 2, 1.0)
    num = numerology_from_index(5).with_active(range(10, 20))
    assert num.n_act == 10
    np.testing.assert_array_equal(num.active, np.arange(10, 20))


@given(st.sampled_from(sorted(CATALOG)), st.sampled_from(sorted(CATALOG)))
def test_cp_ratio_invariant(a, b):
    na, nb = numerology_from_index(a), numerology_from_index(b)
    assert na.n_cp * nb.n_fft == nb.n_cp * na.n_fft
