"""Consistency checks between the closed-form analysis and independent routes.

Each check returns a ``Check`` with the measured value and the tolerance it
was held to; ``run_validation`` bundles the standard suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .channel import _taps, apply_channel, cfr, default_sampling_rate, draw_realization, trial_rng
from .ini import ini_ordering1, ini_ordering2, ini_ordering2_all, mse_vector
from .numerology import Numerology, make_pair
from .ofdm import OfdmOperatorSet
from .rates import (PowerSplit, alpha_grid, noma_state, optimize_split,
                    sn_noma_state, sum_rate_curve)
from .simchain import draw_frame, empirical_interference, genie_sic, synthesize_frame

ORACLE_RTOL = 0.03
ORACLE_COVERAGE = 0.99
DIAG_TOL = 1e-10
SIC_TOL = 1e-10


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: {self.value:.6g} (tol {self.tolerance:g}) {self.detail}".rstrip()


def random_admissible_channel(num: Numerology, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian taps with a random length that fits the CP."""
    n = rng.integers(0, num.n_cp + 1) + 1
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2 * n)


def diagonalized(num: Numerology, h) -> np.ndarray:
    """F R_cp H A_cp F^H, formed by sending every basis symbol through the chain."""
    ops = OfdmOperatorSet(num)
    return ops.demodulate(apply_channel(_taps(h), ops.modulate(np.eye(num.n_act)))).T


def diagonalization_error(num: Numerology, h) -> float:
    """Largest deviation of F R_cp H A_cp F^H from diag(CFR)."""
    m = diagonalized(num, h)
    psi = cfr(h, num.n_fft)[num.active]
    m[np.diag_indices_from(m)] -= psi
    return float(np.abs(m).max())


def diagonalization_bound(num: Numerology, h) -> float:
    """Upper bound on the same deviation without forming any N x N DFT product.

    With the full active set F is unitary, so the deviation's Frobenius norm
    equals that of R_cp H A_cp minus the circulant of ``h``; the two sides
    are built independently as sparse matrices.
    """
    taps = _taps(h)
    n, ncp, length = num.n_fft, num.n_cp, num.symbol_len
    toe = sparse.diags([np.full(length - k, taps[k]) for k in range(len(taps))],
                       [-k for k in range(len(taps))], shape=(length, length), format="csr")
    cp_rows = np.r_[np.arange(n - ncp, n), np.arange(n)]
    a_cp = sparse.csr_matrix((np.ones(length), (np.arange(length), cp_rows)), shape=(length, n))
    r_cp = sparse.csr_matrix((np.ones(n), (np.arange(n), np.arange(ncp, length))), shape=(n, length))
    k = r_cp @ toe @ a_cp
    rows = np.repeat(np.arange(n), len(taps))
    cols = (rows - np.tile(np.arange(len(taps)), n)) % n
    circ = sparse.csr_matrix((np.tile(taps, n), (rows, cols)), shape=(n, n))
    return float(splinalg.norm(k - circ))


def check_diagonalization(nums, channels_per: int, rng: np.random.Generator,
                          dense_max: int = 1024) -> Check:
    worst = 0.0
    for num in nums:
        for _ in range(channels_per):
            h = random_admissible_channel(num, rng)
            err = diagonalization_error(num, h) if num.n_fft <= dense_max \
                else diagonalization_bound(num, h)
            worst = max(worst, err)
    return Check("diagonalization", worst, DIAG_TOL, worst <= DIAG_TOL,
                 f"numerologies {[n.mu for n in nums]}, {channels_per} channels each")


def check_reduction(num: Numerology, h1, h2) -> Check:
    pair = make_pair(num, num)
    g1 = ini_ordering1(h2, pair).gamma_mat
    g2 = ini_ordering2(h1, pair, 1).gamma_mat
    e1 = np.abs(g1 - np.diag(cfr(h2, num.n_fft)[num.active])).max()
    e2 = np.abs(g2 - np.diag(cfr(h1, num.n_fft)[num.active])).max()
    err = float(max(e1, e2))
    return Check("same-numerology reduction", err, DIAG_TOL, err <= DIAG_TOL, f"numerology {num.mu}")


def check_mn_equals_sn(num: Numerology, h1, h2, n0: float, grid_step: float = 0.01) -> Check:
    pair = make_pair(num, num)
    diffs = []
    for ordering in (1, 2):
        _, mn = optimize_split(noma_state(h1, h2, pair), ordering, n0, 1.0, grid_step)
        _, sn = optimize_split(sn_noma_state(h1, h2, pair), ordering, n0, 1.0, grid_step)
        diffs += [mn.rate1 - sn.rate1, mn.rate2 - sn.rate2, mn.split.alpha - sn.split.alpha]
    err = float(np.max(np.abs(diffs)))
    return Check("MN-NOMA(q=1) == SN-NOMA", err, 0.0, err == 0.0, "bitwise")


def oracle_ratios(pair, h1, h2, frames: int, rng: np.random.Generator, p_interferer: float = 1.0,
                  corrupt_offset: int = 0):
    """Empirical over analytic interference power, per ordering and short symbol.

    ``corrupt_offset`` shifts the analytic subcarrier slice; it exists only
    to show that the comparison catches such a bug.
    """
    def analytic(g):
        gamma = mse_vector(g).gamma
        return np.roll(gamma, corrupt_offset) * p_interferer

    emp1 = empirical_interference(pair, h1, h2, p_interferer, 1, frames, rng)
    emp2 = empirical_interference(pair, h1, h2, p_interferer, 2, frames, rng)
    out = {"ordering 1": emp1 / analytic(ini_ordering1(h2, pair))}
    for g in ini_ordering2_all(h1, pair):
        out[f"ordering 2, m={g.m}"] = emp2[g.m - 1] / analytic(g)
    return out


def check_oracle(pair, h1, h2, frames: int, rng, corrupt_offset: int = 0) -> list:
    checks = []
    for name, ratio in oracle_ratios(pair, h1, h2, frames, rng, 1.0, corrupt_offset).items():
        rel = np.abs(ratio - 1)
        coverage = float(np.mean(rel <= ORACLE_RTOL))
        checks.append(Check(f"oracle agreement ({name})", coverage, ORACLE_COVERAGE,
                            coverage >= ORACLE_COVERAGE,
                            f"share within {ORACLE_RTOL:.0%}; max rel err {rel.max():.3g}"))
    return checks


def check_genie_sic(pair, h1, h2, rng) -> Check:
    frame = draw_frame(pair, rng, 8)
    split = PowerSplit(0.6, 0.4, 1.0)
    rx = synthesize_frame(frame, split, h1, h2, 0.0, rng, pair)
    psi1 = cfr(h1, pair.user1.n_fft)[pair.user1.active]
    psi2 = cfr(h2, pair.user2.n_fft)[pair.user2.active]
    _, second1 = genie_sic(rx, frame, split, h1, h2, pair, 1)
    d2 = frame.d2_tilde.reshape(8, pair.q, pair.user2.n_act)
    err1 = np.abs(second1 - np.sqrt(split.p2) * psi2 * d2).max()
    _, second2 = genie_sic(rx, frame, split, h1, h2, pair, 2)
    err2 = np.abs(second2 - np.sqrt(split.p1) * psi1 * frame.d1).max()
    err = float(max(err1, err2))
    return Check("genie SIC residual", err, SIC_TOL, err <= SIC_TOL, "noise off, both orderings")


def optimizer_gap(state, ordering: int, n0: float, grid_step: float = 0.01, refine: int = 10):
    """(fine-grid max minus optimizer sum rate, allowed discretization bound, tie violation)."""
    coarse = alpha_grid(grid_step)
    fine = alpha_grid(grid_step / refine)
    split, rep = optimize_split(state, ordering, n0, 1.0, grid_step)
    curve = sum_rate_curve(state, ordering, n0, 1.0, coarse)
    fine_curve = sum_rate_curve(state, ordering, n0, 1.0, fine)
    # best coarse value can trail the fine optimum by at most slope * step
    slope = np.max(np.abs(np.diff(fine_curve))) / (fine[1] - fine[0])
    bound = slope * grid_step
    violation = float(curve.max() - rep.sum_rate)
    return float(fine_curve.max() - rep.sum_rate), float(bound), violation


def rep_scale(state, ordering, n0, grid_step) -> float:
    return float(np.max(sum_rate_curve(state, ordering, n0, 1.0, alpha_grid(grid_step))))


def check_optimizer(states, n0: float, grid_step: float = 0.01) -> Check:
    worst = 0.0
    ok = True
    for state in states:
        for ordering in (1, 2):
            gap, bound, viol = optimizer_gap(state, ordering, n0, grid_step)
            ok &= gap <= bound and viol <= 1e-12 * rep_scale(state, ordering, n0, grid_step)
            worst = max(worst, gap / bound if bound else 0.0)
    return Check("optimizer vs 10x finer grid", worst, 1.0, bool(ok),
                 "gap as a fraction of the discretization bound")


def check_routes(pair, h1, h2) -> Check:
    err = 0.0
    for method in ("fft", "dense"):
        err = max(err, np.abs(ini_ordering1(h2, pair).gamma_mat
                              - ini_ordering1(h2, pair, method=method).gamma_mat).max())
        for m in range(1, pair.q + 1):
            err = max(err, np.abs(ini_ordering2(h1, pair, m).gamma_mat
                                  - ini_ordering2(h1, pair, m, method=method).gamma_mat).max())
    return Check("dense/fft/structured agreement", float(err), DIAG_TOL, err <= DIAG_TOL)


def run_validation(scenario, corrupt_offset: int = 0) -> list:
    """Standard suite on the scenario's pair and channel profiles."""
    pair = scenario.pair()
    p1, p2 = scenario.profiles
    fs = scenario.fs or default_sampling_rate((p1, p2), pair)
    h1 = draw_realization(p1, fs, trial_rng(scenario.seed, 0, 1))
    h2 = draw_realization(p2, fs, trial_rng(scenario.seed, 0, 2))
    rng = np.random.default_rng(np.random.SeedSequence([scenario.seed, 0xA11]))
    n0 = scenario.total_power / 10 ** (10 / 10)
    checks = [
        check_diagonalization([pair.user1, pair.user2], 10, rng),
        check_reduction(pair.user2, h1, h2),
        check_mn_equals_sn(pair.user2, h1, h2, n0, scenario.grid_step),
        check_routes(pair, h1, h2) if pair.user1.n_fft <= 512 else None,
        *check_oracle(pair, h1, h2, scenario.validate_frames, rng, corrupt_offset),
        check_genie_sic(pair, h1, h2, rng),
        check_optimizer([noma_state(h1, h2, pair)], n0, scenario.grid_step),
    ]
    return [c for c in checks if c is not None]
