import json
import shutil
import subprocess
import sys

import pytest

from bsurv.cli import CSV_HEADER, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("n,line", [
    (0, "0 1"),
    (1, "0 01 1"),
    (2, "0 001 01 011 1"),
    (3, "0 0001 001 00101 01 01011 011 0111 1"),
])
def test_farey(capsys, n, line):
    code, out, _ = call(capsys, "farey", "--level", str(n))
    assert code == 0 and out.strip() == line


def test_farey_json_echoes_config(capsys):
    d = as_json(capsys, "farey", "--level", "1", "--format", "json", "--depth", "5")
    assert d["config"]["depth"] == 5
    assert d["config"]["eps"] == "1/18446744073709551616"


def test_tau(capsys):
    d = as_json(capsys, "tau", "--beta", "2.2")
    assert d["case"] == "BasicInterval" and d["S"] == "1"
    assert d["value_lo"] <= 0.378788 + 1e-6 and d["value_hi"] >= 0.378788 - 1e-6
    assert d["value_hi"] - d["value_lo"] < 1e-12
    assert "config" in d


def test_endpoints(capsys):
    d = as_json(capsys, "endpoints", "--s", "1")
    assert d["beta_l"] == [2.0, 2.0]
    lo, hi = d["beta_r"]
    assert lo <= (3 + 5 ** 0.5) / 2 <= hi


def test_sub_and_word(capsys):
    d = as_json(capsys, "sub", "--s", "01", "--r", "011")
    assert "001101" in json.dumps(d)
    d = as_json(capsys, "word", "--w", "001")
    assert "001" in json.dumps(d)


def test_other_commands_run(capsys):
    for argv in [
        ("alpha", "--beta", "1.7", "--n", "10"),
        ("pi", "--beta", "2", "--seq", ":01"),
        ("classify", "--beta", "1.7"),
        ("dim", "--beta", "2", "--t", "1/3"),
        ("ebeta", "--beta", "2", "--t", "0.4"),
        ("isolated", "--beta", "2.3", "--s", "1"),
        ("kl", "--m", "2", "--show", "16"),
        ("holes", "--k", "3", "--a", "2/9", "--b", "31/90", "--n", "6"),
    ]:
        d = as_json(capsys, *argv)
        assert d["config"]["horizon"] == 10 ** 4


def test_kl_prefix(capsys):
    d = as_json(capsys, "kl", "--m", "2", "--show", "16")
    assert d["alpha_prefix"] == "2102012101202102"


def test_ebeta_witness(capsys):
    d = as_json(capsys, "ebeta", "--beta", "2", "--t", "0.4")
    assert d["member"] is False and d["witness"] == 3


def test_holes_json(capsys):
    d = as_json(capsys, "holes", "--k", "3", "--a", "2/9", "--b", "31/90", "--n", "12")
    assert d["agree"] is True
    for key in ("beta", "t", "dim_omega", "dim_sigma", "dim_survivor"):
        assert len(d[key]) == 2
    assert d["counts_omega"][:4] == [3, 7, 15, 29]


def test_exit_codes(capsys):
    assert call(capsys, "tau", "--beta", "0.5")[0] == 1
    assert call(capsys, "word", "--w", "01x")[0] == 1
    assert call(capsys, "farey", "--level", "40")[0] == 2
    assert call(capsys, "farey", "--level", "1", "--bogus")[0] == 64
    assert call(capsys, "nosuch")[0] == 64
    assert call(capsys, "farey", "--level", "1", "--eps", "0.5")[0] == 1


def test_deterministic(capsys):
    argv = ("classify", "--beta", "1.7")
    first = call(capsys, *argv)[1]
    assert all(call(capsys, *argv)[1] == first for _ in range(3))


def test_staircase_csv(capsys, tmp_path):
    out = tmp_path / "tau.csv"
    code, _, err = call(capsys, "staircase", "--from", "2.1", "--to", "2.2", "--step", "0.05",
                        "--out", str(out), "--check")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "beta,tau_lo,tau_hi,case,coding"
    assert len(lines) == 5
    assert lines[-1].startswith("2.2,") and lines[-1].endswith(",BasicInterval,1")
    assert err


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ndepth = 3\ncap = 12\n")
    d = as_json(capsys, "classify", "--beta", "1.7", "--config", str(cfg))
    assert d["config"]["depth"] == 3 and d["config"]["cap"] == 12
    d = as_json(capsys, "classify", "--beta", "1.7", "--config", str(cfg), "--depth", "4")
    assert d["config"]["depth"] == 4
    cfg.write_text("nonsense\n")
    assert call(capsys, "classify", "--beta", "1.7", "--config", str(cfg))[0] == 1


def _numbers(obj, path=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _numbers(v, f"{path}.{k}")
    elif isinstance(obj, list):
        if len(obj) == 2 and all(isinstance(x, float) for x in obj):
            return
        for i, v in enumerate(obj):
            yield from _numbers(v, f"{path}[{i}]")
    elif isinstance(obj, float):
        yield path


def test_real_fields_are_pairs(capsys):
    for argv in [("endpoints", "--s", "01"), ("dim", "--beta", "2", "--t", "1/3"),
                 ("holes", "--k", "3", "--a", "2/9", "--b", "31/90", "--n", "4")]:
        d = as_json(capsys, *argv)
        d.pop("config")
        # value_lo/value_hi and dim_lo/dim_hi are the two ends of one enclosure
        loose = [p for p in _numbers(d) if p not in (".value_lo", ".value_hi", ".dim_lo", ".dim_hi")]
        assert loose == [], loose


@pytest.mark.skipif(shutil.which("bsurv") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["bsurv", "farey", "--level", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "0 001 01 011 1"


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "bsurv.cli", "farey", "--level", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "0 01 1"
