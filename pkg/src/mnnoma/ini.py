"""Inter-numerology interference matrices and per-subcarrier MSE vectors.

Ordering 1 decodes user 1 first, so user 1 is the victim of the q short
user-2 symbols overlapping its long symbol. Ordering 2 decodes user 2 first;
each of its q symbols sees its own slice of the user-1 symbol, hence one
matrix per short-symbol index m (1-based).

Columns of the ordering-1 matrix are flattened as ``(m - 1) * N_act2 + o``.

Three evaluation routes are kept: ``dense`` (explicit matrix products),
``fft`` (push every basis waveform through the time-domain chain) and
``structured`` (the default). The structured route splits each channel
output into a cyclic part, which is the channel-free template scaled by the
interferer's CFR, plus a transient confined to the first N_ch samples after
every symbol boundary. Only those few samples need fixing up.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .channel import _taps, apply_channel, cfr, toeplitz_matrix
from .numerology import NumerologyPair
from .ofdm import (OfdmOperatorSet, build_frame_user2, frame_modulator_matrix,
                   slice_frame, slice_matrix)


class CpViolationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IniMatrix:
    gamma_mat: np.ndarray
    ordering: int
    m: Optional[int] = None


@dataclass(frozen=True, eq=False)
class MseVector:
    gamma: np.ndarray

    def to_csv(self, path, start: int = 0, active=None):
        idx = np.arange(start, start + len(self.gamma)) if active is None else active
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["subcarrier_index", "mse"])
            for k, v in zip(idx, self.gamma):
                w.writerow([int(k), repr(float(v))])


def _check_cp(h, n_cp: int, strict: bool):
    n_ch = len(_taps(h)) - 1
    if strict and n_ch > n_cp:
        raise CpViolationError(f"channel spans {n_ch} samples, CP holds {n_cp}")


def _window_dft(num, times: np.ndarray) -> np.ndarray:
    """Columns of F R_cp picked by absolute sample positions within the symbol."""
    t = np.asarray(times) - num.n_cp
    return np.exp(-2j * np.pi * np.outer(num.active, t) / num.n_fft) / np.sqrt(num.n_fft)


@lru_cache(maxsize=2)
def _ordering1_template(pair: NumerologyPair):
    """User-2 frame basis waveforms (rows) and their user-1 demodulation."""
    ops1, ops2 = OfdmOperatorSet(pair.user1), OfdmOperatorSet(pair.user2)
    tx = build_frame_user2(np.eye(pair.q * pair.user2.n_act, dtype=complex), ops2, pair.q)
    return tx, ops1.demodulate(tx).T


@lru_cache(maxsize=2)
def _ordering2_template(pair: NumerologyPair):
    """User-1 basis waveforms (rows) and their per-symbol user-2 demodulation."""
    ops1, ops2 = OfdmOperatorSet(pair.user1), OfdmOperatorSet(pair.user2)
    tx = ops1.modulate(np.eye(pair.user1.n_act, dtype=complex))
    g0 = np.stack([ops2.demodulate(slice_frame(tx, m, pair.q, pair.user2.symbol_len)).T
                   for m in range(1, pair.q + 1)])
    return tx, g0, g0.real ** 2 + g0.imag ** 2


def _transient(taps: np.ndarray, tx: np.ndarray, cols, rows: np.ndarray, scale: np.ndarray):
    """Channel output minus its cyclic part at ``rows`` for basis waveforms ``cols``."""
    sub = tx[cols]
    y = np.zeros((len(rows), sub.shape[0]), dtype=complex)
    for lag, h in enumerate(taps):
        src = rows - lag
        ok = src >= 0
        y[ok] += h * sub[:, src[ok]].T
    return y - sub[:, rows].T * scale[cols]


def _ordering1_structured(taps: np.ndarray, pair: NumerologyPair) -> np.ndarray:
    u1, u2, q = pair.user1, pair.user2, pair.q
    tx, g0 = _ordering1_template(pair)
    scale = np.tile(cfr(taps, u2.n_fft)[u2.active], q)
    g = g0 * scale
    n_ch, l2, na2 = len(taps) - 1, u2.symbol_len, u2.n_act
    for b in range(q):
        start = b * l2
        rows = np.arange(max(start, u1.n_cp), min(start + n_ch, pair.frame_len))
        if not len(rows):
            continue
        cols = slice(max(b - 1, 0) * na2, (b + 1) * na2)
        g[:, cols] += _window_dft(u1, rows) @ _transient(taps, tx, cols, rows, scale)
    return g


def _ordering2_structured(taps: np.ndarray, pair: NumerologyPair) -> list:
    u1, u2 = pair.user1, pair.user2
    tx, g0, _ = _ordering2_template(pair)
    scale = cfr(taps, u1.n_fft)[u1.active]
    gs = [g * scale for g in g0]
    # transient of the single long symbol sits in samples [0, N_ch) of short symbol 1
    rows = np.arange(u2.n_cp, min(len(taps) - 1, u2.symbol_len))
    if len(rows):
        cols = slice(0, u1.n_act)
        gs[0] = gs[0] + _window_dft(u2, rows) @ _transient(taps, tx, cols, rows, scale)
    return gs


def ini_ordering1(h2, pair: NumerologyPair, method: str = "structured",
                  strict: bool = True) -> IniMatrix:
    """Interference seen by user-1 subcarriers from all q*N_act2 user-2 symbols.

    ``h2`` is user 2's impulse response; the channel acts on the whole
    long-symbol frame.
    """
    _check_cp(h2, pair.user1.n_cp, strict)
    taps = _taps(h2)
    if method == "structured" and len(taps) - 1 >= pair.user2.symbol_len:
        method = "fft"
    ops1, ops2 = OfdmOperatorSet(pair.user1), OfdmOperatorSet(pair.user2)
    if method == "dense":
        h = toeplitz_matrix(taps, pair.frame_len)
        g = ops1.fmat @ ops1.cp_remove @ h @ frame_modulator_matrix(ops2, pair.q)
    elif method == "fft":
        basis = np.eye(pair.q * pair.user2.n_act, dtype=complex)
        tx = build_frame_user2(basis, ops2, pair.q)
        g = ops1.demodulate(apply_channel(taps, tx)).T
    elif method == "structured":
        g = _ordering1_structured(taps, pair)
    else:
        raise ValueError(f"unknown method {method!r}")
    return IniMatrix(g, 1)


def _user1_through_channel(h1, pair: NumerologyPair) -> np.ndarray:
    ops1 = OfdmOperatorSet(pair.user1)
    return apply_channel(h1, ops1.modulate(np.eye(pair.user1.n_act, dtype=complex)))


def ini_ordering2(h1, pair: NumerologyPair, m: int, method: str = "structured",
                  strict: bool = True) -> IniMatrix:
    """Interference seen by the m-th user-2 symbol from the N_act1 user-1 symbols."""
    if not 1 <= m <= pair.q:
        raise ValueError(f"symbol index m={m} outside 1..{pair.q}")
    _check_cp(h1, pair.user2.n_cp, strict)
    taps = _taps(h1)
    ops1, ops2 = OfdmOperatorSet(pair.user1), OfdmOperatorSet(pair.user2)
    if method == "dense":
        h = toeplitz_matrix(taps, pair.frame_len)
        c = slice_matrix(m, pair.q, pair.user2.symbol_len)
        g = ops2.fmat @ ops2.cp_remove @ c @ h @ ops1.cp_add @ ops1.fmat.conj().T
    elif method == "fft":
        rx = _user1_through_channel(taps, pair)
        g = ops2.demodulate(slice_frame(rx, m, pair.q, pair.user2.symbol_len)).T
    elif method == "structured":
        g = _ordering2_structured(taps, pair)[m - 1]
    else:
        raise ValueError(f"unknown method {method!r}")
    return IniMatrix(g, 2, m)


def ini_ordering2_all(h1, pair: NumerologyPair, method: str = "structured",
                      strict: bool = True) -> list:
    """All q ordering-2 matrices from one pass of user 1 through the channel."""
    _check_cp(h1, pair.user2.n_cp, strict)
    taps = _taps(h1)
    if method == "structured":
        gs = _ordering2_structured(taps, pair)
    elif method == "fft":
        ops2 = OfdmOperatorSet(pair.user2)
        rx = _user1_through_channel(taps, pair)
        gs = [ops2.demodulate(slice_frame(rx, m, pair.q, pair.user2.symbol_len)).T
              for m in range(1, pair.q + 1)]
    else:
        return [ini_ordering2(taps, pair, m, method, strict) for m in range(1, pair.q + 1)]
    return [IniMatrix(g, 2, m) for m, g in enumerate(gs, start=1)]


def mse_ordering1(h2, pair: NumerologyPair, col_weights=None, strict: bool = True) -> np.ndarray:
    """User-1 MSE from user 2, optionally summed over weighted interferer columns.

    ``col_weights`` of shape (q*N_act2, k) yields k MSE vectors at once
    (e.g. all columns and an OMA subset); the result is then (N_act1, k).
    """
    g = ini_ordering1(h2, pair, strict=strict).gamma_mat
    pw = g.real ** 2 + g.imag ** 2
    return pw.sum(axis=1) if col_weights is None else pw @ col_weights


def mse_ordering2(h1, pair: NumerologyPair, col_weights=None, strict: bool = True) -> np.ndarray:
    """User-2 MSE from user 1 per short symbol, shape (q, N_act2[, k]).

    When the CP absorbs the channel the matrices are the template scaled by
    the user-1 CFR, so squared magnitudes factor and no matrix is rebuilt.
    """
    _check_cp(h1, pair.user2.n_cp, strict)
    taps = _taps(h1)
    if len(taps) - 1 <= pair.user2.n_cp:
        _, _, pw0 = _ordering2_template(pair)
        gain = np.abs(cfr(taps, pair.user1.n_fft)[pair.user1.active]) ** 2
        return pw0 @ (gain if col_weights is None else gain[:, None] * col_weights)
    pw = np.stack([_pw(g.gamma_mat) for g in ini_ordering2_all(taps, pair, strict=strict)])
    return pw.sum(axis=-1) if col_weights is None else pw @ col_weights


def _pw(g: np.ndarray) -> np.ndarray:
    return g.real ** 2 + g.imag ** 2


def mse_vector(g) -> MseVector:
    mat = g.gamma_mat if isinstance(g, IniMatrix) else np.asarray(g)
    return MseVector(np.sum(mat.real ** 2 + mat.imag ** 2, axis=1))


def frame_mse(gs) -> MseVector:
    """Mean over the q short symbols of the ordering-2 MSE vectors."""
    return MseVector(np.mean([mse_vector(g).gamma for g in gs], axis=0))
