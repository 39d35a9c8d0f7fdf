"""Interference when a 256-subcarrier user shares the band with a 128-subcarrier user.

Two short symbols fit exactly in one long symbol. Each receiver sees the other
user's signal through its own DFT window, and the grids do not line up, so
energy spreads across subcarriers. The MSE vector is the per-subcarrier
interference power for unit-power data.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mnnoma import EPA, cfr, draw_realization, ini_ordering1, ini_ordering2_all, mse_vector
from mnnoma.channel import default_sampling_rate
from mnnoma.ini import frame_mse
from mnnoma.numerology import pair_from_indices

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

pair = pair_from_indices(4, 5)
fs = default_sampling_rate([EPA, EPA], pair)
print(f"q = {pair.q}, frame = {pair.frame_len} samples, fs = {fs / 1e6:.2f} MHz")

# an ideal channel first: the pattern is purely geometric
g = ini_ordering1([1.0], pair).gamma_mat
gamma = mse_vector(g).gamma
print("flat channel, user 1 MSE on the first 6 tones:", np.round(gamma[:6], 3))
print("  even tones share a grid point with user 2, odd ones fall between")

rng = np.random.default_rng(3)
h1 = draw_realization(EPA, fs, rng)
h2 = draw_realization(EPA, fs, rng)
mse1 = mse_vector(ini_ordering1(h2, pair)).gamma
mse2 = frame_mse(ini_ordering2_all(h1, pair)).gamma

db = lambda v: 10 * np.log10(v)
fig, axes = plt.subplots(2, 1, figsize=(8, 6))
axes[0].plot(db(mse1), lw=0.7, label="user 1 MSE (decoded first)")
axes[0].plot(np.arange(256), db(np.abs(cfr(h2, 128)[np.arange(256) // 2]) ** 2), label="|CFR user 2|^2")
axes[0].legend(fontsize=8)
axes[1].plot(db(mse2), lw=0.7, label="user 2 MSE (decoded first)")
axes[1].plot(db(np.abs(cfr(h1, 256)[::2]) ** 2), label="|CFR user 1|^2 at matching tones")
axes[1].legend(fontsize=8)
axes[1].set_xlabel("subcarrier")
fig.tight_layout()
fig.savefig(out / "mse_vs_cfr.png", dpi=120)

r = np.corrcoef(mse2, np.abs(cfr(h1, 256)[::2]) ** 2)[0, 1]
print(f"user 2 MSE vs user 1 channel gain: correlation {r:.5f}")
print("saved", out / "mse_vs_cfr.png")
