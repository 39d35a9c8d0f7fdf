"""Tapped-delay-line multipath channels: random draws, Toeplitz matrices, CFRs."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import linalg, signal

from .numerology import NumerologyPair


class ChannelTooLongError(ValueError):
    pass


class CpViolationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TapProfile:
    name: str
    delays: tuple  # seconds
    powers_db: tuple
    normalization: bool = True

    def __post_init__(self):
        d = np.asarray(self.delays, dtype=float)
        if len(self.delays) != len(self.powers_db) or not len(d):
            raise ValueError("delays and powers_db must be nonempty and of equal length")
        if d[0] < 0 or np.any(np.diff(d) <= 0):
            raise ValueError("tap delays must be nonnegative and strictly increasing")

    @property
    def max_delay(self) -> float:
        return float(self.delays[-1])

    def tap_indices(self, fs: float) -> np.ndarray:
        # round half up, no fractional-delay interpolation
        return np.floor(np.asarray(self.delays) * fs + 0.5).astype(int)

    def linear_powers(self) -> np.ndarray:
        p = 10.0 ** (np.asarray(self.powers_db, dtype=float) / 10)
        return p / p.sum() if self.normalization else p


# 3GPP TS 36.101/36.116 extended pedestrian A and extended vehicular A
EPA = TapProfile(
    "EPA",
    tuple(t * 1e-9 for t in (0, 30, 70, 90, 110, 190, 410)),
    (0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8),
)
EVA = TapProfile(
    "EVA",
    tuple(t * 1e-9 for t in (0, 30, 150, 310, 370, 710, 1090, 1730, 2510)),
    (0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9),
)
FLAT = TapProfile("FLAT", (0.0,), (0.0,))
BUILTIN_PROFILES = {"EPA": EPA, "EVA": EVA, "FLAT": FLAT}


def load_profile(source) -> TapProfile:
    """Built-in profile by name, or a JSON file of ``(delay_ns, power_db)`` pairs.

    The file may hold a bare list of pairs or an object
    ``{"name": ..., "taps": [[delay_ns, power_db], ...], "normalization": true}``.
    """
    if isinstance(source, TapProfile):
        return source
    key = str(source).upper()
    if key in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[key]
    path = Path(source)
    if not path.is_file():
        raise ValueError(f"unknown channel profile {source!r}")
    raw = json.loads(path.read_text())
    if isinstance(raw, dict):
        taps, name, norm = raw["taps"], raw.get("name", path.stem), raw.get("normalization", True)
    else:
        taps, name, norm = raw, path.stem, True
    taps = np.asarray(taps, dtype=float).reshape(-1, 2)
    return TapProfile(name, tuple(taps[:, 0] * 1e-9), tuple(taps[:, 1]), bool(norm))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    h: np.ndarray
    fs: float
    seed_tag: str = ""

    @property
    def n_ch(self) -> int:
        return len(self.h) - 1


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Generator keyed by (seed, trial, stream), independent of execution order."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial), int(stream)]))


def draw_realization(profile: TapProfile, fs: float, rng: np.random.Generator,
                     seed_tag: str = "") -> ChannelRealization:
    """One Rayleigh block-fading impulse response sampled at ``fs``."""
    if fs <= 0:
        raise ValueError("sampling rate must be positive")
    idx = profile.tap_indices(fs)
    power = profile.linear_powers()
    g = rng.standard_normal((len(idx), 2)) @ np.array([1.0, 1j])
    h = np.zeros(idx.max() + 1, dtype=complex)
    np.add.at(h, idx, np.sqrt(power / 2) * g)
    return ChannelRealization(h, float(fs), seed_tag)


def fixed_realization(h, fs: float = 1.0, seed_tag: str = "fixed") -> ChannelRealization:
    return ChannelRealization(np.atleast_1d(np.asarray(h, dtype=complex)), float(fs), seed_tag)


def _taps(h) -> np.ndarray:
    return h.h if isinstance(h, ChannelRealization) else np.atleast_1d(np.asarray(h, dtype=complex))


def toeplitz_matrix(h, size: int) -> np.ndarray:
    """Lower-triangular Toeplitz convolution matrix of ``h`` (size x size)."""
    taps = _taps(h)
    if len(taps) > size:
        raise ChannelTooLongError(f"channel of {len(taps)} taps longer than frame of {size}")
    col = np.zeros(size, dtype=complex)
    col[:len(taps)] = taps
    row = np.zeros(size, dtype=complex)
    row[0] = taps[0]
    return linalg.toeplitz(col, row)


def apply_channel(h, x: np.ndarray) -> np.ndarray:
    """Implicit Toeplitz product: linear convolution along the last axis, truncated."""
    taps = _taps(h)
    x = np.asarray(x)
    if len(taps) > x.shape[-1]:
        raise ChannelTooLongError(f"channel of {len(taps)} taps longer than frame of {x.shape[-1]}")
    if len(taps) <= 32:
        return signal.lfilter(taps, [1.0], x, axis=-1)
    shape = (1,) * (x.ndim - 1) + (len(taps),)
    y = signal.fftconvolve(x, taps.reshape(shape), axes=-1)
    return y[..., :x.shape[-1]]


def cfr(h, n: int) -> np.ndarray:
    """Non-unitary n-point DFT of the zero-padded impulse response."""
    taps = _taps(h)
    if len(taps) > n:
        raise ChannelTooLongError(f"channel of {len(taps)} taps exceeds DFT size {n}")
    return np.fft.fft(taps, n)


def default_sampling_rate(profiles, pair: NumerologyPair, max_halvings: int = 30) -> float:
    """Largest B / 2**k at which every profile's delay spread fits the shortest CP of ``pair``."""
    profiles = [load_profile(p) for p in profiles]
    fs = pair.bandwidth
    for _ in range(max_halvings):
        if all(p.tap_indices(fs)[-1] <= pair.min_cp for p in profiles):
            return fs
        fs /= 2
    raise ValueError("no admissible sampling rate found")


def check_admissible(profile: TapProfile, fs: float, n_cp: int) -> bool:
    """Warn when the profile's delay spread at ``fs`` overruns a CP of ``n_cp`` samples."""
    n_ch = int(profile.tap_indices(fs)[-1])
    if n_ch > n_cp:
        warnings.warn(f"{profile.name} at fs={fs:g} Hz spans {n_ch} samples > CP of {n_cp}",
                      CpViolationWarning, stacklevel=2)
        return False
    return True
