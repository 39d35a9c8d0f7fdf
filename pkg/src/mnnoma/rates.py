"""Per-subcarrier SINR, achievable rates, sum-rate power search and baselines.

A ``LinkState`` holds everything about one channel instance that does not
depend on power or noise level: the CFRs on each user's active subcarriers
and the MSE vectors each user suffers from the other. Rates for any split,
ordering or SNR are then cheap vectorized evaluations, which is what lets the
exhaustive search and SNR sweeps reuse the expensive interference matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import _taps, cfr
from .ini import mse_ordering1, mse_ordering2
from .numerology import Numerology, NumerologyPair, make_pair

SCHEMES = ("MN-NOMA", "SN-NOMA", "MN-OMA", "SN-OMA")
NO_SIC = 0


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class PowerSplit:
    p1: float
    p2: float
    total: float

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < 0 or not np.isclose(self.p1 + self.p2, self.total, rtol=1e-12, atol=0):
            raise ValueError(f"invalid power split {self.p1} + {self.p2} != {self.total}")

    @classmethod
    def from_alpha(cls, alpha: float, total: float = 1.0) -> "PowerSplit":
        return cls(float(alpha * total), float(total - alpha * total), float(total))

    @property
    def alpha(self) -> float:
        return self.p1 / self.total if self.total else 0.0


@dataclass(frozen=True, eq=False)
class RateReport:
    scheme: str
    ordering: int
    rate1: float
    rate2: float
    sum_rate: float
    se: float
    sinr1: np.ndarray
    sinr2: np.ndarray
    split: PowerSplit
    noise_psd: float
    bandwidth: float
    # which user's SINR carries an MSE term; the other is a pure SNR
    interfered: tuple = field(default=())

    def csv_row(self, trial: int, snr_db: float, q: int) -> list:
        return [trial, snr_db, q, self.scheme, self.ordering, self.split.alpha,
                self.rate1, self.rate2, self.se]


@dataclass(frozen=True, eq=False)
class LinkState:
    """Power-independent view of one channel instance for one scheme.

    ``mse12`` is user 1's MSE from user 2 (length N_act1); ``mse21`` holds
    user 2's MSE from user 1 per short symbol, shape (q, N_act2).
    """
    scheme: str
    user1: Numerology
    user2: Numerology
    q: int
    bandwidth: float
    psi1: np.ndarray
    psi2: np.ndarray
    mse12: np.ndarray
    mse21: np.ndarray
    sic: bool = True

    @property
    def gain1(self) -> np.ndarray:
        return np.abs(self.psi1) ** 2

    @property
    def gain2(self) -> np.ndarray:
        return np.abs(self.psi2) ** 2


def sinr_first_decoded(p_i, p_j, psi_i, mse, n0):
    """SINR of the user decoded first: its own power over INI plus noise."""
    gain = np.abs(np.asarray(psi_i)) ** 2
    return p_i * gain / (p_j * np.asarray(mse) + n0)


def rate_first_decoded(sinr, n_fft: int, bandwidth: float, per_symbol: bool = False):
    """(B/N) sum_n log2(1 + SINR_n) over the last axis.

    With ``per_symbol`` the second-to-last axis indexes the q short symbols
    of a frame and their rates are averaged (bits per frame over frame time).
    """
    r = bandwidth / n_fft * np.sum(np.log2(1.0 + np.asarray(sinr)), axis=-1)
    return np.mean(r, axis=-1) if per_symbol else r


def rate_second_decoded(psi, p, n0, n_fft: int, bandwidth: float):
    gain = np.abs(np.asarray(psi)) ** 2
    return bandwidth / n_fft * np.sum(np.log2(1.0 + p * gain / n0), axis=-1)


def _rates(state: LinkState, ordering: int, p1, p2, n0):
    """(rate1, rate2, sinr1, sinr2) for 1-d arrays of candidate powers."""
    n1, n2, bw = state.user1.n_fft, state.user2.n_fft, state.bandwidth
    p1, p2 = np.atleast_1d(p1).astype(float), np.atleast_1d(p2).astype(float)
    if ordering == 2:
        sinr1 = p1[:, None] * state.gain1 / n0
    else:
        sinr1 = sinr_first_decoded(p1[:, None], p2[:, None], state.psi1, state.mse12, n0)
    if ordering == 1:
        sinr2 = p2[:, None] * state.gain2 / n0
        rate2 = rate_second_decoded(state.psi2, p2[:, None], n0, n2, bw)
    else:
        sinr2 = sinr_first_decoded(p2[:, None, None], p1[:, None, None], state.psi2,
                                   state.mse21, n0)
        rate2 = rate_first_decoded(sinr2, n2, bw, per_symbol=True)
    rate1 = rate_first_decoded(sinr1, n1, bw)
    return rate1, rate2, sinr1, sinr2


def evaluate(state: LinkState, ordering: int, split: PowerSplit, n0: float) -> RateReport:
    if not state.sic:
        ordering = NO_SIC
    elif ordering not in (1, 2):
        raise ValueError(f"ordering must be 1 or 2, got {ordering}")
    r1, r2, s1, s2 = _rates(state, ordering, split.p1, split.p2, n0)
    r1, r2 = float(r1[0]), float(r2[0])
    interfered = {1: ("user1",), 2: ("user2",), NO_SIC: ("user1", "user2")}[ordering]
    return RateReport(state.scheme, ordering, r1, r2, r1 + r2, (r1 + r2) / state.bandwidth,
                      s1[0], s2[0], split, n0, state.bandwidth, interfered)


def alpha_grid(grid_step: float) -> np.ndarray:
    if not 0 < grid_step < 1:
        raise ValueError("grid_step must lie in (0, 1)")
    k = np.arange(1, int(np.ceil(1 / grid_step)) + 1)
    a = k * grid_step
    return a[a < 1 - 1e-12]


def sum_rate_curve(state: LinkState, ordering: int, n0: float, total: float, alphas) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float)
    r1, r2, _, _ = _rates(state, ordering if state.sic else NO_SIC, alphas * total,
                          total - alphas * total, n0)
    return r1 + r2


def best_alpha(alphas, sum_rates, rtol: float = 1e-12) -> int:
    """Index of the smallest alpha whose sum rate is within ``rtol`` of the maximum."""
    s = np.asarray(sum_rates)
    best = s.max()
    return int(np.flatnonzero(s >= best - rtol * abs(best))[0])


def optimize_split(state: LinkState, ordering: int, n0: float, total: float = 1.0,
                   grid_step: float = 0.01):
    alphas = alpha_grid(grid_step)
    curve = sum_rate_curve(state, ordering, n0, total, alphas)
    split = PowerSplit.from_alpha(alphas[best_alpha(alphas, curve)], total)
    return split, evaluate(state, ordering, split, n0)


def _full(num: Numerology) -> bool:
    return num.n_act == num.n_fft


def noma_state(h1, h2, pair: NumerologyPair, scheme: str = "MN-NOMA",
               strict: bool = True) -> LinkState:
    """Interference state for superimposed users on ``pair``'s active sets."""
    u1, u2 = pair.user1, pair.user2
    psi1 = cfr(h1, u1.n_fft)[u1.active]
    psi2 = cfr(h2, u2.n_fft)[u2.active]
    n_ch = max(len(_taps(h1)), len(_taps(h2))) - 1
    if pair.q == 1 and u1.active_set == u2.active_set and n_ch <= pair.min_cp:
        # same grid and CP absorbs the channel: interference matrices are diag(CFR)
        mse12 = np.abs(psi2) ** 2
        mse21 = (np.abs(psi1) ** 2)[None, :]
    else:
        mse12, mse21 = _mse_general(h1, h2, pair, strict)
    return LinkState(scheme, u1, u2, pair.q, pair.bandwidth, psi1, psi2, mse12, mse21)


def _mse_general(h1, h2, pair, strict, cols12=None, cols21=None):
    """MSE vectors, optionally restricted to weighted subsets of interferer columns."""
    return (mse_ordering1(h2, pair, cols12, strict=strict),
            mse_ordering2(h1, pair, cols21, strict=strict))


def oma_partition(pair: NumerologyPair, guard: int = 0):
    """Active sets for adjacent bandwidth parts: user 1 low half, user 2 high half.

    ``guard`` user-1 subcarriers are removed from the top of user 1's half.
    """
    n1, n2 = pair.user1.n_fft, pair.user2.n_fft
    if not 0 <= guard <= n1 // 2:
        raise PartitionError(f"guard band {guard} outside 0..{n1 // 2}")
    act1 = range(0, n1 // 2 - guard)
    act2 = range(n2 // 2, n2)
    return pair.user1.with_active(act1), pair.user2.with_active(act2)


def mn_oma_state(h1, h2, pair: NumerologyPair, guard: int = 0, ideal: bool = False,
                 strict: bool = True) -> LinkState:
    """Adjacent-BWP OMA keeping both numerologies; INI from the neighbour's band."""
    u1, u2 = oma_partition(pair, guard)
    opair = NumerologyPair(u1, u2, pair.q)
    psi1 = cfr(h1, u1.n_fft)[u1.active]
    psi2 = cfr(h2, u2.n_fft)[u2.active]
    if ideal or u1.n_act == 0 or u2.n_act == 0:
        mse12, mse21 = np.zeros(u1.n_act), np.zeros((pair.q, u2.n_act))
    else:
        mse12, mse21 = _mse_general(h1, h2, opair, strict)
    return LinkState("MN-OMA", u1, u2, pair.q, pair.bandwidth, psi1, psi2, mse12, mse21, sic=False)


def sn_oma_state(h1, h2, num: Numerology, bandwidth: Optional[float] = None) -> LinkState:
    """Both users on ``num`` in disjoint halves; orthogonal, hence interference-free."""
    n = num.n_fft
    u1, u2 = num.with_active(range(n // 2)), num.with_active(range(n // 2, n))
    psi1 = cfr(h1, n)[u1.active]
    psi2 = cfr(h2, n)[u2.active]
    return LinkState("SN-OMA", u1, u2, 1, bandwidth or num.bandwidth, psi1, psi2,
                     np.zeros(u1.n_act), np.zeros((1, u2.n_act)), sic=False)


def sn_noma_state(h1, h2, pair: NumerologyPair, numerology: str = "user1") -> LinkState:
    num = {"user1": pair.user1, "user2": pair.user2}[numerology]
    full = num.with_active(range(num.n_fft))
    return noma_state(h1, h2, make_pair(full, full), scheme="SN-NOMA")


def trial_states(h1, h2, pair: NumerologyPair, guard: int = 0, ideal_oma: bool = False,
                 sn_numerology: str = "user1", schemes=SCHEMES) -> dict:
    """All scheme states for one channel instance.

    MN-NOMA and MN-OMA share one pass over the interference matrices when the
    pair is fully active: the OMA MSE is a column-restricted row sum of the
    same squared magnitudes.
    """
    states = {}
    want_mn = "MN-NOMA" in schemes
    want_oma = "MN-OMA" in schemes
    if want_mn and want_oma and not ideal_oma and _full(pair.user1) and _full(pair.user2) \
            and pair.q > 1:
        u1o, u2o = oma_partition(pair, guard)
        cols12 = np.zeros(pair.q * pair.user2.n_fft)
        for m in range(pair.q):
            cols12[m * pair.user2.n_fft + u2o.active] = 1.0
        cols21 = np.zeros(pair.user1.n_fft)
        cols21[u1o.active] = 1.0
        cols12 = np.stack([np.ones_like(cols12), cols12], axis=1)
        cols21 = np.stack([np.ones_like(cols21), cols21], axis=1)
        m12, m21 = _mse_general(h1, h2, pair, True, cols12, cols21)
        psi1 = cfr(h1, pair.user1.n_fft)
        psi2 = cfr(h2, pair.user2.n_fft)
        states["MN-NOMA"] = LinkState("MN-NOMA", pair.user1, pair.user2, pair.q, pair.bandwidth,
                                      psi1, psi2, m12[:, 0], m21[:, :, 0])
        if u1o.n_act and u2o.n_act:
            oma12, oma21 = m12[u1o.active, 1], m21[:, u2o.active, 1]
        else:
            oma12, oma21 = np.zeros(u1o.n_act), np.zeros((pair.q, u2o.n_act))
        states["MN-OMA"] = LinkState("MN-OMA", u1o, u2o, pair.q, pair.bandwidth,
                                     psi1[u1o.active], psi2[u2o.active], oma12, oma21, sic=False)
    else:
        if want_mn:
            states["MN-NOMA"] = noma_state(h1, h2, pair)
        if want_oma:
            states["MN-OMA"] = mn_oma_state(h1, h2, pair, guard, ideal_oma)
    if "SN-NOMA" in schemes:
        states["SN-NOMA"] = sn_noma_state(h1, h2, pair, sn_numerology)
    if "SN-OMA" in schemes:
        num = {"user1": pair.user1, "user2": pair.user2}[sn_numerology]
        states["SN-OMA"] = sn_oma_state(h1, h2, num.with_active(range(num.n_fft)), pair.bandwidth)
    return {k: states[k] for k in schemes if k in states}


def exhaustive_power_search(h1, h2, pair: NumerologyPair, ordering: int, n0: float,
                            total: float = 1.0, grid_step: float = 0.01):
    """Sum-rate maximizing split of ``total`` between the users for one SIC ordering."""
    return optimize_split(noma_state(h1, h2, pair), ordering, n0, total, grid_step)


def baseline_rates(kind: str, h1, h2, pair: NumerologyPair, n0: float, total: float = 1.0,
                   ordering: int = 1, grid_step: float = 0.01, guard: int = 0,
                   ideal: bool = False, sn_numerology: str = "user1") -> RateReport:
    half = PowerSplit(total / 2, total / 2, total)
    if kind == "SN-NOMA":
        return optimize_split(sn_noma_state(h1, h2, pair, sn_numerology), ordering, n0,
                              total, grid_step)[1]
    if kind == "MN-OMA":
        return evaluate(mn_oma_state(h1, h2, pair, guard, ideal), NO_SIC, half, n0)
    if kind == "SN-OMA":
        num = {"user1": pair.user1, "user2": pair.user2}[sn_numerology]
        state = sn_oma_state(h1, h2, num.with_active(range(num.n_fft)), pair.bandwidth)
        return evaluate(state, NO_SIC, half, n0)
    raise ValueError(f"unknown baseline {kind!r}")

