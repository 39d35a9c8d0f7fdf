"""End-to-end experiments: MSE/CFR traces, SE against SNR, SE against q, validation.

Every experiment takes a ``Scenario`` and writes CSV files into
``scenario.out``. Channel draws are keyed by (seed, trial, user), so the same
trial sees the same channels across SNR points, schemes and q values that
share a sampling rate.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import plots
from .channel import (check_admissible, default_sampling_rate, draw_realization, load_profile,
                      trial_rng)
from .ini import frame_mse, ini_ordering1, ini_ordering2_all, mse_vector
from .numerology import (CATALOG, DELTA_F_BASE, NumerologyPair, UnsupportedNumerologyError,
                         pair_from_indices)
from .rates import NO_SIC, PowerSplit, evaluate, optimize_split, trial_states

log = logging.getLogger(__name__)

SE_HEADER = ["trial", "snr_db", "q", "scheme", "ordering", "alpha", "rate1_bps", "rate2_bps",
             "se_bps_hz"]
SUMMARY_HEADER = ["snr_db", "q", "scheme", "ordering", "mean_se_bps_hz", "trials"]
MSE_HEADER = ["user", "subcarrier", "cfr_sq", "mse_ord1", "mse_ord2_mean"]


class ConfigError(ValueError):
    pass


class InadmissibleChannelError(ConfigError):
    pass


@dataclass
class Scenario:
    user1: int = 4
    user2: int = 5
    profile1: str = "EPA"
    profile2: str = "EPA"
    snr_db: list = field(default_factory=lambda: [0.0, 5.0, 10.0, 15.0, 20.0])
    q_sweep: list = field(default_factory=lambda: [2, 4, 8, 16])
    q_snr_db: float = 10.0
    trials: int = 200
    seed: int = 0
    grid_step: float = 0.01
    total_power: float = 1.0
    sn_noma: bool = True
    mn_oma: bool = True
    sn_oma: bool = False
    sn_numerology: str = "user1"
    guard_band: int = 0
    ideal_oma: bool = False
    fs: Optional[float] = None
    delta_f_base: float = DELTA_F_BASE
    validate_frames: int = 10_000
    out: str = "results"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not len(self.snr_db):
            raise ConfigError("snr_db grid must be nonempty")
        for mu in (self.user1, self.user2):
            if mu not in CATALOG:
                raise ConfigError(f"numerology {mu} not in catalog")
        if not 0 < self.grid_step < 1:
            raise ConfigError("grid_step must lie in (0, 1)")
        if self.sn_numerology not in ("user1", "user2"):
            raise ConfigError("sn_numerology must be 'user1' or 'user2'")
        for q in self.q_sweep:
            if q < 1 or q & (q - 1):
                raise ConfigError(f"q={q} is not a power of two")
        self.snr_db = [float(s) for s in self.snr_db]
        self.q_sweep = [int(q) for q in self.q_sweep]
        try:
            self.profiles
        except (ValueError, KeyError, OSError) as exc:
            raise ConfigError(f"bad channel profile: {exc}") from exc

    @classmethod
    def from_dict(cls, raw: dict) -> "Scenario":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        try:
            return cls(**raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "Scenario":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("scenario file must hold a JSON object")
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def profiles(self):
        return load_profile(self.profile1), load_profile(self.profile2)

    def pair(self, user2: Optional[int] = None) -> NumerologyPair:
        try:
            return pair_from_indices(self.user1, self.user2 if user2 is None else user2,
                                     self.delta_f_base)
        except (UnsupportedNumerologyError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def schemes(self) -> tuple:
        out = ["MN-NOMA"]
        if self.sn_noma:
            out.append("SN-NOMA")
        if self.mn_oma:
            out.append("MN-OMA")
        if self.sn_oma:
            out.append("SN-OMA")
        return tuple(out)


def sampling_rate(scenario: Scenario, pair: NumerologyPair) -> float:
    """Scenario sampling rate; raises if an explicit ``fs`` overruns the shortest CP."""
    profiles = scenario.profiles
    if scenario.fs is None:
        return default_sampling_rate(profiles, pair)
    for p in profiles:
        if not check_admissible(p, scenario.fs, pair.min_cp):
            raise InadmissibleChannelError(
                f"{p.name} at fs={scenario.fs:g} Hz spans {int(p.tap_indices(scenario.fs)[-1])} "
                f"samples, longer than the CP of {pair.min_cp} samples")
    return float(scenario.fs)


def draw_channels(scenario: Scenario, trial: int, fs: float):
    p1, p2 = scenario.profiles
    h1 = draw_realization(p1, fs, trial_rng(scenario.seed, trial, 1), f"{scenario.seed}/{trial}/1")
    h2 = draw_realization(p2, fs, trial_rng(scenario.seed, trial, 2), f"{scenario.seed}/{trial}/2")
    return h1, h2


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return str(x)


def write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_csv(path) -> list:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


# ---------------------------------------------------------------- mse

def mse_table(scenario: Scenario, trial: int = 0):
    """Per-subcarrier |CFR|^2 and MSE of both users for one seeded channel draw."""
    pair = scenario.pair()
    fs = sampling_rate(scenario, pair)
    h1, h2 = draw_channels(scenario, trial, fs)
    cfr1 = np.abs(np.fft.fft(h1.h, pair.user1.n_fft)) ** 2
    cfr2 = np.abs(np.fft.fft(h2.h, pair.user2.n_fft)) ** 2
    mse1 = mse_vector(ini_ordering1(h2, pair)).gamma
    per_m = ini_ordering2_all(h1, pair)
    mse2_m = np.array([mse_vector(g).gamma for g in per_m])
    mse2 = frame_mse(per_m).gamma
    return dict(pair=pair, fs=fs, h1=h1, h2=h2, cfr1=cfr1, cfr2=cfr2, mse1=mse1,
                mse2=mse2, mse2_m=mse2_m)


def run_mse(scenario: Scenario, plot: bool = True) -> dict:
    t = mse_table(scenario)
    pair = t["pair"]
    rows = [[1, int(n), t["cfr1"][n], t["mse1"][i], ""] for i, n in enumerate(pair.user1.active)]
    rows += [[2, int(n), t["cfr2"][n], "", t["mse2"][i]] for i, n in enumerate(pair.user2.active)]
    out = Path(scenario.out)
    write_csv(out / "mse.csv", MSE_HEADER, rows)
    per_m = [[m + 1, int(n), t["mse2_m"][m, i]]
             for m in range(pair.q) for i, n in enumerate(pair.user2.active)]
    write_csv(out / "mse_per_symbol.csv", ["m", "subcarrier", "mse_ord2"], per_m)
    if plot:
        plots.plot_mse(t, out / "mse.svg")
    log.info("mse: q=%d fs=%g Hz -> %s", pair.q, t["fs"], out / "mse.csv")
    return t


# ---------------------------------------------------------------- spectral efficiency

def _trial_rows(scenario: Scenario, pair: NumerologyPair, fs: float, trial: int, snrs) -> list:
    h1, h2 = draw_channels(scenario, trial, fs)
    states = trial_states(h1, h2, pair, scenario.guard_band, scenario.ideal_oma,
                          scenario.sn_numerology, scenario.schemes())
    total = scenario.total_power
    half = PowerSplit(total / 2, total / 2, total)
    rows = []
    for snr in snrs:
        n0 = total / 10 ** (snr / 10)
        for scheme, state in states.items():
            if state.sic:
                for ordering in (1, 2):
                    _, rep = optimize_split(state, ordering, n0, total, scenario.grid_step)
                    rows.append(rep.csv_row(trial, snr, pair.q))
            else:
                rows.append(evaluate(state, NO_SIC, half, n0).csv_row(trial, snr, pair.q))
    return rows


def _summarize(rows) -> list:
    groups = {}
    for r in rows:
        groups.setdefault((r[1], r[2], r[3], r[4]), []).append(r[8])
    return [[snr, q, scheme, ordering, math.fsum(v) / len(v), len(v)]
            for (snr, q, scheme, ordering), v in groups.items()]


def _order_key(scenario: Scenario):
    rank = {s: i for i, s in enumerate(scenario.schemes())}
    return lambda r: (r[2], r[1], r[0], rank[r[3]], r[4])


def se_rows(scenario: Scenario, pair: NumerologyPair, snrs, progress=None) -> list:
    fs = sampling_rate(scenario, pair)
    rows = []
    for trial in range(scenario.trials):
        rows.extend(_trial_rows(scenario, pair, fs, trial, snrs))
        if progress:
            progress(trial)
    return rows


def run_se_vs_snr(scenario: Scenario, plot: bool = True) -> dict:
    pair = scenario.pair()
    rows = sorted(se_rows(scenario, pair, scenario.snr_db), key=_order_key(scenario))
    summary = _summarize(rows)
    out = Path(scenario.out)
    write_csv(out / "se_vs_snr.csv", SE_HEADER, rows)
    write_csv(out / "se_vs_snr_summary.csv", SUMMARY_HEADER, summary)
    if plot:
        plots.plot_se(summary, "snr_db", out / "se_vs_snr.svg",
                      f"numerologies {scenario.user1}/{scenario.user2}, "
                      f"{scenario.profile1}/{scenario.profile2}")
    return dict(rows=rows, summary=summary)


def run_se_vs_q(scenario: Scenario, plot: bool = True) -> dict:
    """Sweep user 2 over numerologies giving the configured q values at a fixed SNR."""
    rows = []
    for q in scenario.q_sweep:
        mu2 = scenario.user1 + int(round(math.log2(q)))
        if mu2 not in CATALOG:
            raise ConfigError(f"q={q} needs numerology {mu2}, outside the catalog")
        rows.extend(se_rows(scenario, scenario.pair(mu2), [scenario.q_snr_db]))
    rows.sort(key=_order_key(scenario))
    summary = _summarize(rows)
    out = Path(scenario.out)
    write_csv(out / "se_vs_q.csv", SE_HEADER, rows)
    write_csv(out / "se_vs_q_summary.csv", SUMMARY_HEADER, summary)
    if plot:
        plots.plot_se(summary, "q", out / "se_vs_q.svg",
                      f"user 1 numerology {scenario.user1}, SNR {scenario.q_snr_db:g} dB, "
                      f"{scenario.profile1}/{scenario.profile2}")
    return dict(rows=rows, summary=summary)


def mean_se(summary, scheme: str, ordering: int, key: str = "snr_db") -> dict:
    col = 0 if key == "snr_db" else 1
    return {r[col]: r[4] for r in summary if r[2] == scheme and r[3] == ordering}
