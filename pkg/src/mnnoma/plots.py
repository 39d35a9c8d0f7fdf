"""Static SVG figures. CSV files are the contract; these are for eyeballing."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "mnnoma"

STYLE = {
    ("MN-NOMA", 1): dict(color="C0", marker="o", label="MN-NOMA, ordering 1"),
    ("MN-NOMA", 2): dict(color="C1", marker="s", label="MN-NOMA, ordering 2"),
    ("SN-NOMA", 1): dict(color="C2", ls="--", marker="^", label="SN-NOMA, ordering 1"),
    ("SN-NOMA", 2): dict(color="C4", ls=":", marker="v", label="SN-NOMA, ordering 2"),
    ("MN-OMA", 0): dict(color="C3", marker="x", label="MN-OMA"),
    ("SN-OMA", 0): dict(color="C5", marker="+", label="SN-OMA"),
}


def _save(fig, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_mse(table: dict, path):
    pair = table["pair"]
    db = lambda v: 10 * np.log10(np.maximum(v, 1e-30))
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=False)
    n1 = pair.user1.active
    ax = axes[0]
    ax.plot(n1, db(table["mse1"]), lw=0.8, label="MSE user 1 (ordering 1)")
    ax.plot(n1, db(table["cfr1"][n1]), lw=1.2, label="|CFR| user 1")
    ax.plot(np.arange(pair.user2.n_fft) * pair.q, db(table["cfr2"]), lw=1.2, ls="--",
            label="|CFR| user 2")
    ax.set_ylabel("dB")
    ax.set_title(f"user 1 subcarriers (q = {pair.q})")
    ax.legend(fontsize=8)
    n2 = pair.user2.active
    ax = axes[1]
    ax.plot(n2, db(table["mse2"]), lw=0.8, label="MSE user 2 (ordering 2, mean over m)")
    ax.plot(n2, db(table["cfr2"][n2]), lw=1.2, label="|CFR| user 2")
    ax.plot(np.arange(pair.user1.n_fft) / pair.q, db(table["cfr1"]), lw=1.2, ls="--",
            label="|CFR| user 1")
    ax.set_xlabel("subcarrier")
    ax.set_ylabel("dB")
    ax.set_title("user 2 subcarriers")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_se(summary, xkey: str, path, title: str = ""):
    col = 0 if xkey == "snr_db" else 1
    series = {}
    for row in summary:
        series.setdefault((row[2], row[3]), []).append((row[col], row[4]))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for key, pts in series.items():
        pts.sort()
        x, y = zip(*pts)
        ax.plot(x, y, **STYLE.get(key, dict(label=f"{key[0]} {key[1]}")))
    if xkey == "q":
        ax.set_xscale("log", base=2)
        ax.set_xlabel("q")
    else:
        ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("average SE (bit/s/Hz)")
    ax.set_title(title, fontsize=9)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
