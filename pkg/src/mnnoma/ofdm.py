"""CP-OFDM structural operators.

Every operator exists in two forms: explicit dense matrices (used to build
interference matrices by products) and FFT-based implicit versions that act
on the last axis of an array, so whole batches of symbols go through at once.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np
from scipy import fft as sfft

from .numerology import Numerology


def dft_rows(num: Numerology) -> np.ndarray:
    """Rows of the unitary N-point DFT matrix selected by the active set."""
    n = num.n_fft
    return np.exp(-2j * np.pi * np.outer(num.active, np.arange(n)) / n) / np.sqrt(n)


def cp_add_matrix(num: Numerology) -> np.ndarray:
    n, ncp = num.n_fft, num.n_cp
    eye = np.eye(n)
    return np.vstack([eye[n - ncp:], eye])


def cp_remove_matrix(num: Numerology) -> np.ndarray:
    n, ncp = num.n_fft, num.n_cp
    return np.hstack([np.zeros((n, ncp)), np.eye(n)])


class OfdmOperatorSet:
    """Modulation operators of one numerology.

    ``fmat``, ``cp_add`` and ``cp_remove`` are built lazily; at the largest
    catalog size a dense DFT submatrix is 256 MiB, so prefer the implicit
    ``modulate``/``demodulate`` methods outside of tests.
    """

    def __init__(self, num: Numerology):
        self.num = num

    @cached_property
    def fmat(self) -> np.ndarray:
        return dft_rows(self.num)

    @cached_property
    def cp_add(self) -> np.ndarray:
        return cp_add_matrix(self.num)

    @cached_property
    def cp_remove(self) -> np.ndarray:
        return cp_remove_matrix(self.num)

    def modulate(self, d: np.ndarray) -> np.ndarray:
        """A_cp F^H d along the last axis."""
        num = self.num
        d = np.asarray(d)
        if d.shape[-1] != num.n_act:
            raise ValueError(f"expected {num.n_act} symbols, got {d.shape[-1]}")
        grid = np.zeros(d.shape[:-1] + (num.n_fft,), dtype=complex)
        grid[..., num.active] = d
        x = sfft.ifft(grid, axis=-1, norm="ortho")
        return np.concatenate([x[..., num.n_fft - num.n_cp:], x], axis=-1)

    def demodulate(self, r: np.ndarray) -> np.ndarray:
        """F R_cp r along the last axis."""
        num = self.num
        r = np.asarray(r)
        if r.shape[-1] != num.symbol_len:
            raise ValueError(f"expected {num.symbol_len} samples, got {r.shape[-1]}")
        y = sfft.fft(r[..., num.n_cp:], axis=-1, norm="ortho")
        return y[..., num.active]


def build_operators(num: Numerology) -> OfdmOperatorSet:
    return OfdmOperatorSet(num)


def modulate_symbol(d: np.ndarray, ops: OfdmOperatorSet) -> np.ndarray:
    return ops.modulate(d)


def build_frame_user2(d2_tilde: np.ndarray, ops2: OfdmOperatorSet, q: int) -> np.ndarray:
    """Concatenate q short CP-OFDM symbols carrying consecutive slices of ``d2_tilde``."""
    d2_tilde = np.asarray(d2_tilde)
    n_act = ops2.num.n_act
    if d2_tilde.shape[-1] != q * n_act:
        raise ValueError(f"expected {q * n_act} symbols, got {d2_tilde.shape[-1]}")
    blocks = d2_tilde.reshape(d2_tilde.shape[:-1] + (q, n_act))
    x = ops2.modulate(blocks)
    return x.reshape(d2_tilde.shape[:-1] + (q * ops2.num.symbol_len,))


def frame_modulator_matrix(ops2: OfdmOperatorSet, q: int) -> np.ndarray:
    """Dense I_q kron (A_cp F^H)."""
    return np.kron(np.eye(q), ops2.cp_add @ ops2.fmat.conj().T)


def slice_matrix(m: int, q: int, symbol_len: int) -> np.ndarray:
    """0/1 selector of the m-th (1-based) short symbol in a frame of q symbols."""
    if not 1 <= m <= q:
        raise ValueError(f"symbol index m={m} outside 1..{q}")
    c = np.zeros((symbol_len, q * symbol_len))
    c[:, (m - 1) * symbol_len:m * symbol_len] = np.eye(symbol_len)
    return c


def slice_frame(r: np.ndarray, m: int, q: int, symbol_len: int) -> np.ndarray:
    """Implicit form of ``slice_matrix(m, q, symbol_len) @ r`` along the last axis."""
    if not 1 <= m <= q:
        raise ValueError(f"symbol index m={m} outside 1..{q}")
    return np.asarray(r)[..., (m - 1) * symbol_len:m * symbol_len]
