"""Why the cyclic prefix matters: a channel becomes one complex gain per subcarrier.

Send every basis symbol through modulate -> channel -> demodulate and look at
the resulting matrix. With the delay spread inside the CP it is diagonal and
the diagonal is the channel frequency response. Stretch the channel past the
CP and energy leaks off the diagonal.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mnnoma.channel import cfr
from mnnoma.numerology import numerology_from_index
from mnnoma.validation import diagonalized

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

num = numerology_from_index(5)  # 128 subcarriers, 9-sample CP
print(f"numerology {num.mu}: N={num.n_fft}, CP={num.n_cp}, L={num.symbol_len}")

rng = np.random.default_rng(0)
short = (rng.standard_normal(6) + 1j * rng.standard_normal(6)) / np.sqrt(12)
long_ = (rng.standard_normal(30) + 1j * rng.standard_normal(30)) / np.sqrt(60)

fig, axes = plt.subplots(1, 2, figsize=(9, 4))
for ax, h, label in zip(axes, (short, long_), ("6 taps (fits CP)", "30 taps (overruns CP)")):
    m = diagonalized(num, h)
    off = m - np.diag(np.diag(m))
    err = np.abs(np.diag(m) - cfr(h, num.n_fft)).max()
    print(f"{label}: max |diag - CFR| = {err:.2e}, max off-diagonal = {np.abs(off).max():.2e}")
    ax.imshow(20 * np.log10(np.abs(m) + 1e-16), vmin=-80, vmax=10, cmap="magma")
    ax.set_title(label)
    ax.set_xlabel("transmitted subcarrier")
axes[0].set_ylabel("received subcarrier")
fig.tight_layout()
fig.savefig(out / "diagonalization.png", dpi=120)
print("saved", out / "diagonalization.png")
