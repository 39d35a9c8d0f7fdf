"""Time-domain Monte Carlo chain with genie-aided SIC.

Frames are synthesized sample by sample (modulate, convolve, add noise) and
received through the same front ends a real receiver would use. Nothing in
here touches the interference matrices, so measured interference powers are
an independent check on the closed-form MSE vectors.

All functions accept a leading batch axis of frames.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import _taps, apply_channel
from .numerology import NumerologyPair
from .ofdm import OfdmOperatorSet, build_frame_user2, slice_frame
from .rates import PowerSplit

MIN_TRIALS = 100


@dataclass(frozen=True, eq=False)
class FrameSymbols:
    d1: np.ndarray
    d2_tilde: np.ndarray
    k: int = 0


@dataclass(frozen=True, eq=False)
class ReceivedFrame:
    r: np.ndarray
    w: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    h1: np.ndarray
    h2: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return apply_channel(self.h1, self.s1) + apply_channel(self.h2, self.s2) + self.w


def qpsk(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-energy i.i.d. uniform QPSK."""
    bits = rng.integers(0, 2, size=tuple(np.atleast_1d(shape)) + (2,))
    return ((1 - 2 * bits) @ np.array([1.0, 1j])) / np.sqrt(2)


def draw_frame(pair: NumerologyPair, rng: np.random.Generator, n_frames=None, k: int = 0) -> FrameSymbols:
    lead = () if n_frames is None else (n_frames,)
    d1 = qpsk(rng, lead + (pair.user1.n_act,))
    d2 = qpsk(rng, lead + (pair.q * pair.user2.n_act,))
    return FrameSymbols(d1, d2, k)


def transmit(frame: FrameSymbols, split: PowerSplit, pair: NumerologyPair):
    """Scaled time-domain signals of both users over one long-symbol frame."""
    s1 = np.sqrt(split.p1) * OfdmOperatorSet(pair.user1).modulate(frame.d1)
    s2 = np.sqrt(split.p2) * build_frame_user2(frame.d2_tilde, OfdmOperatorSet(pair.user2), pair.q)
    return s1, s2


def complex_noise(rng: np.random.Generator, shape, n0: float) -> np.ndarray:
    return np.sqrt(n0 / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def synthesize_frame(frame: FrameSymbols, split: PowerSplit, h1, h2, n0: float,
                     rng: np.random.Generator, pair: NumerologyPair) -> ReceivedFrame:
    s1, s2 = transmit(frame, split, pair)
    h1, h2 = _taps(h1), _taps(h2)
    w = complex_noise(rng, s1.shape, n0) if n0 > 0 else np.zeros(s1.shape, dtype=complex)
    r = apply_channel(h1, s1) + apply_channel(h2, s2) + w
    return ReceivedFrame(r, w, s1, s2, h1, h2)


def front_end_user1(r: np.ndarray, pair: NumerologyPair) -> np.ndarray:
    return OfdmOperatorSet(pair.user1).demodulate(r)


def front_end_user2(r: np.ndarray, pair: NumerologyPair, m: int) -> np.ndarray:
    ops2 = OfdmOperatorSet(pair.user2)
    return ops2.demodulate(slice_frame(r, m, pair.q, pair.user2.symbol_len))


def front_end_user2_all(r: np.ndarray, pair: NumerologyPair) -> np.ndarray:
    """Observations of all q short symbols, shape (..., q, N_act2)."""
    return np.stack([front_end_user2(r, pair, m) for m in range(1, pair.q + 1)], axis=-2)


def genie_sic(rx, frame: FrameSymbols, split: PowerSplit, h1, h2, pair: NumerologyPair,
              order: int):
    """First-stage observations and cleaned second-stage observations.

    The first-decoded user is re-modulated from the true symbols, passed
    through its channel and subtracted before the second front end.
    """
    r = rx.r if isinstance(rx, ReceivedFrame) else np.asarray(rx)
    s1, s2 = transmit(frame, split, pair)
    if order == 1:
        first = front_end_user1(r, pair)
        second = front_end_user2_all(r - apply_channel(_taps(h1), s1), pair)
    elif order == 2:
        first = front_end_user2_all(r, pair)
        second = front_end_user1(r - apply_channel(_taps(h2), s2), pair)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    return first, second


def empirical_interference(pair: NumerologyPair, h1, h2, p_interferer: float, ordering: int,
                           trials: int, rng: np.random.Generator, batch: int = 2000) -> np.ndarray:
    """Per-subcarrier mean interference power at the first-decoded user.

    Channels stay fixed, data is redrawn every frame and noise is off. The
    victim transmits nothing, so its stage-1 observation is interference only.
    Ordering 1 returns shape (N_act1,); ordering 2 returns (q, N_act2).
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    if ordering == 1:
        split = PowerSplit(0.0, p_interferer, p_interferer)
    elif ordering == 2:
        split = PowerSplit(p_interferer, 0.0, p_interferer)
    else:
        raise ValueError(f"ordering must be 1 or 2, got {ordering}")
    acc = 0.0
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        frame = draw_frame(pair, rng, n)
        rx = synthesize_frame(frame, split, h1, h2, 0.0, rng, pair)
        y = front_end_user1(rx.r, pair) if ordering == 1 else front_end_user2_all(rx.r, pair)
        acc = acc + np.sum(y.real ** 2 + y.imag ** 2, axis=0)
        done += n
    return acc / trials
