"""A small version of the SE-vs-SNR experiment, straight from the library.

The CLI (``mnnoma se-vs-snr``) does the same at 200 trials and writes CSV.
"""
import tempfile

from mnnoma.experiments import Scenario, mean_se, run_se_vs_snr

with tempfile.TemporaryDirectory() as tmp:
    scen = Scenario(trials=20, profile2="EVA", out=tmp)
    res = run_se_vs_snr(scen, plot=False)

cols = [("MN-NOMA", 1), ("MN-NOMA", 2), ("SN-NOMA", 1), ("MN-OMA", 0)]
table = {c: mean_se(res["summary"], *c) for c in cols}
print("SNR dB " + "".join(f"{s + ' ' + str(o):>14}" for s, o in cols))
for snr in scen.snr_db:
    print(f"{snr:6.0f} " + "".join(f"{table[c][snr]:14.4f}" for c in cols))
