import math

import numpy as np
import pytest

from mnnoma.experiments import (MSE_HEADER, SE_HEADER, ConfigError, InadmissibleChannelError,
                                Scenario, mean_se, read_csv, run_mse, run_se_vs_q, run_se_vs_snr,
                                sampling_rate)


def test_scenario_validation():
    with pytest.raises(ConfigError):
        Scenario(trials=0)
    with pytest.raises(ConfigError):
        Scenario(snr_db=[])
    with pytest.raises(ConfigError):
        Scenario(user1=7)
    with pytest.raises(ConfigError):
        Scenario.from_dict({"trails": 3})
    with pytest.raises(ConfigError):
        Scenario(q_sweep=[3])
    with pytest.raises(ConfigError):
        Scenario(user1=5, user2=4).pair()


def test_scenario_json_roundtrip(tmp_path):
    import json
    s = Scenario(trials=7, snr_db=[1, 2], profile2="EVA")
    f = tmp_path / "s.json"
    f.write_text(json.dumps(s.to_dict()))
    assert Scenario.from_json(f) == s


def test_inadmissible_fs():
    s = Scenario(fs=1e9)
    with pytest.raises(InadmissibleChannelError, match="fs=1e\\+09.*CP of 9"):
        with pytest.warns(UserWarning):
            sampling_rate(s, s.pair())


def test_mse_schema(tmp_path):
    run_mse(Scenario(out=str(tmp_path)), plot=False)
    rows = read_csv(tmp_path / "mse.csv")
    assert list(rows[0]) == MSE_HEADER
    assert len(rows) == 256 + 128
    assert sum(r["user"] == "1" for r in rows) == 256
    assert len(read_csv(tmp_path / "mse_per_symbol.csv")) == 2 * 128


def test_mse_q1_reduction(tmp_path):
    t = run_mse(Scenario(user1=5, user2=5, out=str(tmp_path)), plot=False)
    np.testing.assert_allclose(t["mse1"], t["cfr2"], atol=1e-10)
    np.testing.assert_allclose(t["mse2"], t["cfr1"], atol=1e-10)
    rows = read_csv(tmp_path / "mse.csv")
    got = np.array([float(r["mse_ord1"]) for r in rows if r["user"] == "1"])
    np.testing.assert_allclose(got, t["cfr2"], atol=1e-10)


def test_mse_flat_alternates(tmp_path):
    t = run_mse(Scenario(profile1="FLAT", profile2="FLAT", out=str(tmp_path)), plot=True)
    assert (t["mse1"][0::2] > t["mse1"][1::2]).all()
    assert (tmp_path / "mse.svg").is_file()


def test_se_vs_snr_schema_and_means(tmp_path):
    s = Scenario(trials=4, snr_db=[0, 10], out=str(tmp_path), sn_oma=True)
    res = run_se_vs_snr(s, plot=False)
    rows = read_csv(tmp_path / "se_vs_snr.csv")
    assert list(rows[0]) == SE_HEADER
    # two orderings for each SIC scheme, one row for each OMA scheme
    assert len(rows) == 4 * 2 * (2 + 2 + 1 + 1)
    se = np.array([float(r["se_bps_hz"]) for r in rows])
    assert np.isfinite(se).all() and (se >= 0).all()
    for snr, q, scheme, ordering, mean, n in res["summary"]:
        vals = [float(r["se_bps_hz"]) for r in rows if float(r["snr_db"]) == snr
                and r["scheme"] == scheme and int(r["ordering"]) == ordering]
        assert n == len(vals) == 4
        assert abs(math.fsum(vals) / n - mean) <= 1e-9
    means = mean_se(res["summary"], "MN-NOMA", 1)
    assert set(means) == {0.0, 10.0}


def test_se_vs_q_point_matches_se_vs_snr(tmp_path):
    base = dict(user1=1, trials=3, seed=9, sn_noma=False)
    q = run_se_vs_q(Scenario(q_sweep=[2], q_snr_db=10, out=str(tmp_path / "q"), **base), plot=False)
    snr = run_se_vs_snr(Scenario(user2=2, snr_db=[10], out=str(tmp_path / "s"), **base), plot=False)
    assert len(q["rows"]) == len(snr["rows"])
    for a, b in zip(q["rows"], snr["rows"]):
        assert a[:5] == b[:5]
        np.testing.assert_allclose(a[5:], b[5:], rtol=1e-12, atol=0)


def test_se_vs_q_catalog_bound(tmp_path):
    with pytest.raises(ConfigError):
        run_se_vs_q(Scenario(user1=4, q_sweep=[4], trials=1, out=str(tmp_path)), plot=False)
