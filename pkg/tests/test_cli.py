import json
import subprocess
import sys

import pytest

from repvar.cli import run_command


def run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run_command(argv + ["-o", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_analyze_exit_codes(tmp_path):
    code, rep = run_json(["analyze", "8_20"], tmp_path)
    assert code == 0
    assert rep["delta"] == [1, -2, 3, -2, 1]
    code, rep = run_json(["analyze", "trefoil"], tmp_path, "t.json")
    assert code == 1
    assert rep["checks"]["sl3_gate"] is False


def test_refusal_and_bad_input(tmp_path):
    assert run_command(["construct", "trefoil"]) == 1
    assert run_command(["analyze", "PD[X[1,2,3]]"]) == 4
    assert run_command(["analyze", "no_such_knot"]) == 4
    assert run_command(["analyze", "8_20", "--alpha-root", "7"]) == 4


@pytest.mark.parametrize("command", ["analyze", "construct", "cohomology", "deform"])
def test_verify_round_trip(command, tmp_path):
    code, rep = run_json([command, "8_20", "--alpha-root", "1"], tmp_path)
    assert code == 0 and rep["kind"] == command
    assert run_command(["verify", str(tmp_path / "out.json"), "-o", str(tmp_path / "v.json")]) == 0
    verdict = json.loads((tmp_path / "v.json").read_text())
    assert verdict["checks"] and all(verdict["checks"].values())


def test_verify_detects_tampering(tmp_path):
    code, rep = run_json(["construct", "8_20"], tmp_path)
    assert code == 0
    rep["rep"]["generators"][2][0][2][0] += 1e-3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rep))
    assert run_command(["verify", str(bad), "-o", str(tmp_path / "v.json")]) == 2
    rep["schema"] = 99
    bad.write_text(json.dumps(rep))
    assert run_command(["verify", str(bad)]) == 4


def test_deform_options(tmp_path):
    code, rep = run_json(["deform", "8_20", "--t", "0.004", "--order", "3", "--workers", "2"], tmp_path)
    assert code == 0
    cert = rep["certificate"]
    assert cert["orders"] == 3 and [s["t"] for s in cert["samples"]] == [0.004]
    assert cert["stable"] and cert["nonmetabelian"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repvar", "analyze", "figure8"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 1  # simple roots only: the SL(3) gate refuses
    assert json.loads(proc.stdout)["delta"] == [1, -3, 1]
