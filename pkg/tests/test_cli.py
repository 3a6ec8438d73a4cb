import csv
import io
import subprocess
import sys

import pytest

from spinlab.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_tables_all():
    code, text = run("tables")
    assert code == 0
    assert text.count("Table ") == 5


def test_tables_which():
    code, text = run("tables", "--which", "5")
    assert code == 0
    assert "4IySzRx" in text and "4IzSyRx" in text
    code, text = run("tables", "--which", "1")
    assert code == 0 and "f8" in text.splitlines()[1]


def test_run_pure():
    code, text = run("run", "--mode", "pure", "--function", "f4")
    assert code == 0
    assert text.strip() == "f4: balanced (truth balanced), p00=0.000000"


@pytest.mark.parametrize("mode", ["pure", "pseudo-pure", "thermal-ideal", "thermal-experimental"])
def test_run_all_ideal(mode):
    code, text = run("run", "--mode", mode, "--all")
    assert code == 0
    assert text.count("truth") == 8


def test_run_truth_table_selector():
    code, text = run("run", "--mode", "thermal-experimental", "--function", "1001")
    assert code == 0 and text.startswith("f7: balanced")


def test_run_pulse_single(tmp_path):
    code, text = run("run", "--mode", "pulse", "--function", "f1", "--out", str(tmp_path))
    assert code == 0
    assert "constant" in text.splitlines()[1]
    rows = list(csv.DictReader(open(tmp_path / "report.csv")))
    assert [r["function"] for r in rows] == ["f1"]
    assert (tmp_path / "spectrum_f1.csv").exists()


def test_run_pulse_all_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    code, text = run("run", "--all", "--out", str(a))
    assert code == 0
    assert len(text.splitlines()) == 9
    run("run", "--all", "--out", str(b))
    for name in ["report.csv", "spectrum_f8.csv"]:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_all_exit_status_reflects_decisions():
    # an extreme threshold misclassifies the constants
    code, _ = run("run", "--mode", "pulse", "--all", "--threshold", "0.99")
    assert code == 1


def test_restore(tmp_path):
    code, text = run("restore", "f7", "--coupling", "weak", "--out", str(tmp_path))
    assert code == 0
    lines = {l.split()[0]: l.split() for l in text.splitlines()[1:]}
    assert float(lines["I"][3]) >= 3 and float(lines["S"][3]) >= 3
    assert lines["R"][3] == "-"
    assert (tmp_path / "restore_f7_after.csv").exists()


def test_restore_constant_rejected(capsys):
    code, _ = run("restore", "f1")
    assert code == 2
    assert "constant function has no suppressed lines" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv,msg",
    [
        (("run", "--function", "0001"), "neither constant nor balanced"),
        (("run", "--function", "f9"), "invalid function"),
        (("run", "--function", "f1", "--config", "/nonexistent.yaml"), "cannot read"),
        (("run", "--function", "f1", "--threshold", "2"), "threshold"),
        (("run", "--function", "f1", "--dt", "0.01"), "too coarse"),
    ],
)
def test_errors(capsys, argv, msg):
    code, _ = run(*argv)
    assert code == 2
    assert msg in capsys.readouterr().err


def test_config_env_fallback(tmp_path, monkeypatch):
    path = tmp_path / "c.yaml"
    path.write_text("offsets_hz: [250.0, 165.8, 0.0]\ncoupling_model: weak\n")
    monkeypatch.setenv("SPINLAB_CONFIG", str(path))
    code, text = run("run", "--function", "f3")
    assert code == 0 and "balanced" in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spinlab", "tables", "--which", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "Δ(E,2σx,2σx,E)" in proc.stdout
