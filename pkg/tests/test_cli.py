import json

import pytest

from mnnoma.cli import main

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def _bytes(path):
    return {p.name: p.read_bytes() for p in sorted(path.glob("*.csv"))}


@pytest.mark.parametrize("args", [
    ["mse"],
    ["se-vs-snr", "--trials", "3", "--snr-db", "0", "20"],
    ["se-vs-q", "--user1", "3", "--trials", "2", "--q-sweep", "2", "4"],
])
def test_byte_identical_reruns(tmp_path, args):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert _bytes(a) and _bytes(a) == _bytes(b)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"trials": 50, "snr_db": [5], "seed": 3}))
    out = tmp_path / "o"
    assert main(["se-vs-snr", "--config", str(cfg), "--trials", "2", "--out", str(out),
                 "--no-plot"]) == 0
    lines = (out / "se_vs_snr.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * (2 + 2 + 1)
    assert not (out / "se_vs_snr.svg").exists()


@pytest.mark.parametrize("args", [
    ["mse", "--user1", "9"],
    ["mse", "--user1", "5", "--user2", "4"],
    ["mse", "--fs", "1e9"],
    ["se-vs-snr", "--trials", "0"],
    ["mse", "--profile1", "nosuch"],
])
def test_config_errors_exit_2(tmp_path, capsys, args):
    assert main(args + ["--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert main(["mse", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["mse", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_validate_report(tmp_path, capsys):
    assert main(["validate", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "validation.json").read_text())
    assert report["passed"] and len(report["checks"]) >= 6
    for c in report["checks"]:
        assert {"name", "value", "tolerance", "passed"} <= set(c)
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == len(report["checks"])
    assert all(line.startswith("[PASS]") for line in printed)


def test_corrupted_slice_fails_oracle(tmp_path):
    assert main(["validate", "--corrupt-offset", "1", "--out", str(tmp_path)]) == 1
    report = json.loads((tmp_path / "validation.json").read_text())
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert failed and all(name.startswith("oracle agreement") for name in failed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_verdict_stable_across_seeds(tmp_path, seed):
    assert main(["validate", "--seed", str(seed), "--out", str(tmp_path / "ok")]) == 0
    assert main(["validate", "--seed", str(seed), "--corrupt-offset", "1",
                 "--out", str(tmp_path / "bad")]) == 1
