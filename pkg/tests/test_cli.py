import csv
import math
import subprocess
import sys

import pytest

from quench_ht import cli
from quench_ht.cli import ConfigError, main, parse_real, parse_real_list, sigma_label

HEADER = "model,pairs,sigma,delta_tau,mean_fidelity,sd,sample_size,seed"


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def read_manifest(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    keys = [ln.split(" = ", 1)[0] for ln in lines]
    assert keys == sorted(keys)
    return dict(ln.split(" = ", 1) for ln in lines)


@pytest.mark.parametrize(
    "text,value",
    [
        ("pi/90", math.pi / 90),
        ("2*pi/45", 2 * math.pi / 45),
        ("7*pi/90", 7 * math.pi / 90),
        (" PI/10 ", math.pi / 10),
        ("0.25", 0.25),
        ("0", 0.0),
        ("1e-2", 0.01),
    ],
)
def test_parse_real(text, value):
    assert parse_real(text) == value


@pytest.mark.parametrize("text", ["abc", "pi/0", "pi*2", "nan", "inf", "pi/x"])
def test_parse_real_rejects(text):
    with pytest.raises(ConfigError):
        parse_real(text)


def test_pi_literals_land_on_default_grid():
    grid = parse_real_list("pi/90,pi/45,pi/30,2*pi/45,pi/18,pi/15,7*pi/90,4*pi/45,pi/10")
    assert grid == tuple(k * math.pi / 90 for k in range(1, 10))


def test_sigma_label():
    assert sigma_label(math.pi / 90) == "pi/90"
    assert sigma_label(4 * math.pi / 90) == "2*pi/45"
    assert sigma_label(0.5) == "0.5"


def test_sweep_row_count(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    code = main(["sweep", "--model", "tfim2", "--sweep", "sigma", "--pairs", "3",
                 "--sample-size", "3", "--seed", "7", "--out", str(out)])
    assert code == 0
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == HEADER
    assert "\r" not in text
    rows = read_csv(out)
    assert len(rows) == 15
    assert {r["pairs"] for r in rows} == {"3"}
    assert all(r["model"] == "tfim2" and r["seed"] == "7" for r in rows)
    assert "F_av" in capsys.readouterr().out


def test_sweep_zero_noise(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["sweep", "--model", "pauli", "--sweep", "sigma", "--sigma-grid", "0",
                 "--sample-size", "10", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 3
    assert all(abs(float(r["mean_fidelity"]) - 1) < 1e-9 for r in rows)


def test_tau_sweep_rows_sorted(tmp_path):
    out = tmp_path / "rf3.csv"
    assert main(["sweep", "--model", "rf3", "--sweep", "tau", "--pairs", "12,6",
                 "--sample-size", "2", "--seed", "11", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 20
    keys = [(int(r["pairs"]), float(r["delta_tau"])) for r in rows]
    assert keys == sorted(keys)
    assert all(float(r["sigma"]) == math.pi / 90 for r in rows)


def test_floats_round_trip(tmp_path):
    out = tmp_path / "f.csv"
    main(["sweep", "--model", "sic", "--sigma-grid", "pi/30", "--pairs", "3",
          "--sample-size", "5", "--out", str(out)])
    (row,) = read_csv(out)
    assert float(row["sigma"]) == math.pi / 30
    assert repr(float(row["mean_fidelity"])) == row["mean_fidelity"]


def test_manifest(tmp_path):
    out = tmp_path / "m.csv"
    main(["sweep", "--model", "pauli", "--sigma-grid", "pi/90,pi/10", "--pairs", "3,6",
          "--sample-size", "2", "--seed", "5", "--out", str(out)])
    manifest = read_manifest(tmp_path / "m.csv.manifest")
    assert manifest["sigma_grid"] == "0.034906585039886591,0.31415926535897931"
    assert float(manifest["sigma_grid"].split(",")[0]) == math.pi / 90
    assert manifest["fixed_sigma"] == "0.034906585039886591"
    assert manifest["pairs"] == "3,6"
    assert manifest["seed"] == "5"
    assert manifest["sample_size"] == "2"
    assert manifest["model"] == "pauli"
    assert manifest["jitter_mode"] == "entry"
    assert {"timestamp", "version", "outputs", "tau_grid", "quench_time"} <= manifest.keys()


def test_manifest_reproduces_csv(tmp_path):
    first = tmp_path / "a.csv"
    main(["sweep", "--model", "polarization", "--sigma-grid", "pi/45,pi/20", "--pairs", "3",
          "--sample-size", "4", "--seed", "3", "--jitter-mode", "pair", "--out", str(first)])
    m = read_manifest(tmp_path / "a.csv.manifest")
    second = tmp_path / "b.csv"
    main(["sweep", "--model", m["model"], "--sweep", m["sweep"], "--pairs", m["pairs"],
          "--sample-size", m["sample_size"], "--sigma-grid", m["sigma_grid"], "--tau-grid", m["tau_grid"],
          "--fixed-sigma", m["fixed_sigma"], "--quench-time", m["quench_time"],
          "--jitter-mode", m["jitter_mode"], "--seed", m["seed"], "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--model", "ising"],
        ["sweep", "--model", "pauli", "--sigma-grid", "0.1,abc"],
        ["sweep", "--model", "pauli", "--pairs", "3,x"],
        ["sweep", "--model", "pauli", "--sigma-grid", "0.2,0.1"],
        ["sweep", "--model", "rf3", "--pairs", "3"],
        ["reproduce", "--target", "fig9"],
    ],
)
def test_config_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path / "x.csv")]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_model_names_valid_ids(capsys, tmp_path):
    main(["sweep", "--model", "ising", "--out", str(tmp_path / "x.csv")])
    assert "sic, polarization, pauli, tfim2, rf3" in capsys.readouterr().err


def test_bad_choice_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["sweep", "--model", "pauli", "--jitter-mode", "row"])
    assert info.value.code == 2


def test_numerical_failure_exit_1(monkeypatch, tmp_path, capsys):
    def boom(*a, **k):
        raise cli.TrialError(0.1, 3, 0, FloatingPointError("bad"))

    monkeypatch.setattr(cli, "run_sweep", boom)
    assert main(["sweep", "--model", "pauli", "--out", str(tmp_path / "x.csv")]) == 1


def test_presets_cover_targets():
    assert set(cli.PRESETS) == {f"fig{i}" for i in range(1, 8)} | {"table1", "table2"}
    assert cli.PRESETS["fig5"].pair_counts == (3, 12)
    assert cli.PRESETS["fig7"].pair_counts == (6, 12)
    assert cli.PRESETS["fig6"].config(1).sample_size == 25
    assert len(cli.TABLE2) == 18 and len(cli.TABLE1) == 9


def test_reproduce_table1(tmp_path, capsys):
    assert main(["reproduce", "--target", "table1", "--seed", "1", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "table1.csv")
    assert len(rows) == 9
    comparison = (tmp_path / "table1_comparison.txt").read_text()
    assert "F_av(paper)" in comparison and "0.940" in comparison and "0.880" in comparison
    assert (tmp_path / "table1.csv.manifest").exists()
    assert "pi/45" in capsys.readouterr().out


def test_reproduce_fig5(tmp_path):
    assert main(["reproduce", "--target", "fig5", "--seed", "1", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "fig5.csv")
    assert len(rows) == 20
    assert {r["pairs"] for r in rows} == {"3", "12"}
    assert all(float(r["sigma"]) == math.pi / 90 and r["model"] == "tfim2" for r in rows)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "quench_ht", "sweep", "--model", "pauli", "--sigma-grid", "0",
         "--pairs", "3", "--sample-size", "2", "--out", str(tmp_path / "e.csv")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
