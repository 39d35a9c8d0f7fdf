"""5G NR numerology catalog and two-user numerology pairing."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# mu -> (subcarriers, CP length); normal CP, CP/N = 9/128 for every entry
CATALOG = {
    0: (4096, 288),
    1: (2048, 144),
    2: (1024, 72),
    3: (512, 36),
    4: (256, 18),
    5: (128, 9),
}

DELTA_F_BASE = 15e3


class UnsupportedNumerologyError(ValueError):
    pass


class IncompatibleNumerologiesError(ValueError):
    pass


@dataclass(frozen=True)
class Numerology:
    mu: int
    n_fft: int
    n_cp: int
    delta_f: float
    active_set: tuple = field(default=None)

    def __post_init__(self):
        n = self.n_fft
        if n < 1 or n & (n - 1):
            raise ValueError(f"n_fft must be a power of two, got {n}")
        if not 0 <= self.n_cp <= n:
            raise ValueError(f"invalid CP length {self.n_cp}")
        if self.active_set is None:
            object.__setattr__(self, "active_set", tuple(range(n)))
        else:
            act = tuple(int(k) for k in self.active_set)
            if any(b <= a for a, b in zip(act, act[1:])):
                raise ValueError("active_set must be strictly increasing")
            if act and (act[0] < 0 or act[-1] >= n):
                raise ValueError("active_set out of range")
            object.__setattr__(self, "active_set", act)

    @property
    def n_act(self) -> int:
        return len(self.active_set)

    @property
    def symbol_len(self) -> int:
        return self.n_fft + self.n_cp

    @property
    def bandwidth(self) -> float:
        return self.n_fft * self.delta_f

    @property
    def active(self) -> np.ndarray:
        return np.asarray(self.active_set, dtype=int)

    def with_active(self, active_set) -> "Numerology":
        return Numerology(self.mu, self.n_fft, self.n_cp, self.delta_f, tuple(active_set))


def numerology_from_index(mu: int, delta_f_base: float = DELTA_F_BASE) -> Numerology:
    """Catalog entry ``mu`` with all subcarriers active.

    >>> numerology_from_index(3).symbol_len
    548
    """
    if mu not in CATALOG:
        raise UnsupportedNumerologyError(f"numerology {mu!r} not in catalog (0..5)")
    n_fft, n_cp = CATALOG[mu]
    return Numerology(mu, n_fft, n_cp, delta_f_base * 2**mu)


@dataclass(frozen=True)
class NumerologyPair:
    user1: Numerology
    user2: Numerology
    q: int

    @property
    def frame_len(self) -> int:
        return self.user1.symbol_len

    @property
    def bandwidth(self) -> float:
        return self.user1.bandwidth

    @property
    def min_cp(self) -> int:
        return min(self.user1.n_cp, self.user2.n_cp)


def make_pair(user1: Numerology, user2: Numerology) -> NumerologyPair:
    """Pair a narrow-spacing user 1 with a wide-spacing user 2 (q short symbols per long one)."""
    n1, n2 = user1.n_fft, user2.n_fft
    if n1 < n2 or n1 % n2:
        raise IncompatibleNumerologiesError(f"N1={n1} is not a power-of-two multiple of N2={n2}")
    q = n1 // n2
    if q & (q - 1):
        raise IncompatibleNumerologiesError(f"ratio q={q} is not a power of two")
    if not np.isclose(user1.bandwidth, user2.bandwidth, rtol=1e-12):
        raise IncompatibleNumerologiesError(
            f"bandwidth mismatch: {user1.bandwidth} Hz vs {user2.bandwidth} Hz")
    if user1.symbol_len != q * user2.symbol_len:
        raise IncompatibleNumerologiesError(
            f"{q} symbols of length {user2.symbol_len} do not tile length {user1.symbol_len}")
    return NumerologyPair(user1, user2, q)


def pair_from_indices(mu1: int, mu2: int, delta_f_base: float = DELTA_F_BASE) -> NumerologyPair:
    return make_pair(numerology_from_index(mu1, delta_f_base), numerology_from_index(mu2, delta_f_base))
